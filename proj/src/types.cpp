#include "mpst/types.hpp"

#include <optional>
#include <stdexcept>

namespace mpst {

std::string Action::to_string() const {
    std::string out = peer.name;
    out += dir == Dir::Send ? '!' : '?';
    out += label;
    if (!sort.is_unit()) {
        out += '(';
        out += sort.name;
        out += ')';
    }
    return out;
}

std::string ActKey::to_string() const {
    std::string out(1, dir == Dir::Send ? '!' : '?');
    out += peer.name;
    return out;
}

std::set<ActKey> act(const std::vector<Action>& actions) {
    std::set<ActKey> keys;
    for (const Action& a : actions) keys.insert({a.dir, a.peer});
    return keys;
}

LocalRef LocalType::make_end() {
    auto t = std::make_shared<LocalType>();
    t->kind = Kind::End;
    return t;
}

LocalRef LocalType::make_select(Role peer, std::vector<LocalChoice> choices) {
    auto t = std::make_shared<LocalType>();
    t->kind = Kind::Select;
    t->peer = std::move(peer);
    t->choices = std::move(choices);
    return t;
}

LocalRef LocalType::make_branch(Role peer, std::vector<LocalChoice> choices) {
    auto t = std::make_shared<LocalType>();
    t->kind = Kind::Branch;
    t->peer = std::move(peer);
    t->choices = std::move(choices);
    return t;
}

LocalRef LocalType::make_rec(std::string var, LocalRef body) {
    auto t = std::make_shared<LocalType>();
    t->kind = Kind::Rec;
    t->var = std::move(var);
    t->body = std::move(body);
    return t;
}

LocalRef LocalType::make_var(std::string name) {
    auto t = std::make_shared<LocalType>();
    t->kind = Kind::Var;
    t->var = std::move(name);
    return t;
}

GlobalRef GlobalType::make_end() {
    auto t = std::make_shared<GlobalType>();
    t->kind = Kind::End;
    return t;
}

GlobalRef GlobalType::make_msg(Role from, Role to, std::vector<GlobalChoice> choices) {
    auto t = std::make_shared<GlobalType>();
    t->kind = Kind::Msg;
    t->from = std::move(from);
    t->to = std::move(to);
    t->choices = std::move(choices);
    return t;
}

GlobalRef GlobalType::make_rec(std::string var, GlobalRef body) {
    auto t = std::make_shared<GlobalType>();
    t->kind = Kind::Rec;
    t->var = std::move(var);
    t->body = std::move(body);
    return t;
}

GlobalRef GlobalType::make_var(std::string name) {
    auto t = std::make_shared<GlobalType>();
    t->kind = Kind::Var;
    t->var = std::move(name);
    return t;
}

bool structural_equal(const LocalRef& a, const LocalRef& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case LocalType::Kind::End:
            return true;
        case LocalType::Kind::Var:
            return a->var == b->var;
        case LocalType::Kind::Rec:
            return a->var == b->var && structural_equal(a->body, b->body);
        case LocalType::Kind::Select:
        case LocalType::Kind::Branch: {
            if (a->peer != b->peer || a->choices.size() != b->choices.size()) return false;
            for (std::size_t i = 0; i < a->choices.size(); ++i) {
                const auto& ca = a->choices[i];
                const auto& cb = b->choices[i];
                if (ca.label != cb.label || ca.sort != cb.sort) return false;
                if (!structural_equal(ca.cont, cb.cont)) return false;
            }
            return true;
        }
    }
    return false;
}

bool structural_equal(const GlobalRef& a, const GlobalRef& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case GlobalType::Kind::End:
            return true;
        case GlobalType::Kind::Var:
            return a->var == b->var;
        case GlobalType::Kind::Rec:
            return a->var == b->var && structural_equal(a->body, b->body);
        case GlobalType::Kind::Msg: {
            if (a->from != b->from || a->to != b->to) return false;
            if (a->choices.size() != b->choices.size()) return false;
            for (std::size_t i = 0; i < a->choices.size(); ++i) {
                const auto& ca = a->choices[i];
                const auto& cb = b->choices[i];
                if (ca.label != cb.label || ca.sort != cb.sort) return false;
                if (!structural_equal(ca.cont, cb.cont)) return false;
            }
            return true;
        }
    }
    return false;
}

namespace {

template <typename Choice>
std::optional<std::string> check_labels(const std::vector<Choice>& choices) {
    if (choices.empty()) return "choice with no branches";
    std::set<std::string> seen;
    for (const auto& c : choices) {
        if (!seen.insert(c.label).second) return "duplicate label '" + c.label + "'";
    }
    return std::nullopt;
}

std::optional<std::string> check_local(const LocalRef& t, std::vector<std::string>& bound) {
    switch (t->kind) {
        case LocalType::Kind::End:
            return std::nullopt;
        case LocalType::Kind::Var: {
            for (const auto& v : bound)
                if (v == t->var) return std::nullopt;
            return "unbound variable '" + t->var + "'";
        }
        case LocalType::Kind::Rec: {
            for (const auto& v : bound)
                if (v == t->var) return "shadowed recursion variable '" + t->var + "'";
            // Contractivity: stripping nested recs must not expose a bare variable.
            LocalRef stripped = t->body;
            while (stripped->kind == LocalType::Kind::Rec) stripped = stripped->body;
            if (stripped->kind == LocalType::Kind::Var)
                return "non-contractive recursion 'rec " + t->var + "'";
            bound.push_back(t->var);
            auto err = check_local(t->body, bound);
            bound.pop_back();
            return err;
        }
        case LocalType::Kind::Select:
        case LocalType::Kind::Branch: {
            if (t->peer.name.empty()) return "choice with empty peer";
            if (auto err = check_labels(t->choices)) return err;
            for (const auto& c : t->choices)
                if (auto err = check_local(c.cont, bound)) return err;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_global(const GlobalRef& t, std::vector<std::string>& bound) {
    switch (t->kind) {
        case GlobalType::Kind::End:
            return std::nullopt;
        case GlobalType::Kind::Var: {
            for (const auto& v : bound)
                if (v == t->var) return std::nullopt;
            return "unbound variable '" + t->var + "'";
        }
        case GlobalType::Kind::Rec: {
            for (const auto& v : bound)
                if (v == t->var) return "shadowed recursion variable '" + t->var + "'";
            GlobalRef stripped = t->body;
            while (stripped->kind == GlobalType::Kind::Rec) stripped = stripped->body;
            if (stripped->kind == GlobalType::Kind::Var)
                return "non-contractive recursion 'rec " + t->var + "'";
            bound.push_back(t->var);
            auto err = check_global(t->body, bound);
            bound.pop_back();
            return err;
        }
        case GlobalType::Kind::Msg: {
            if (t->from == t->to) return "self-message from '" + t->from.name + "'";
            if (auto err = check_labels(t->choices)) return err;
            for (const auto& c : t->choices)
                if (auto err = check_global(c.cont, bound)) return err;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> well_formed_violation(const LocalRef& type) {
    std::vector<std::string> bound;
    return check_local(type, bound);
}

std::optional<std::string> well_formed_violation(const GlobalRef& type) {
    std::vector<std::string> bound;
    return check_global(type, bound);
}

bool occurs(const GlobalRef& type, const Role& role) {
    switch (type->kind) {
        case GlobalType::Kind::End:
        case GlobalType::Kind::Var:
            return false;
        case GlobalType::Kind::Rec:
            return occurs(type->body, role);
        case GlobalType::Kind::Msg: {
            if (type->from == role || type->to == role) return true;
            for (const auto& c : type->choices)
                if (occurs(c.cont, role)) return true;
            return false;
        }
    }
    return false;
}

LocalRef substitute(const LocalRef& type, const std::string& var, const LocalRef& replacement) {
    switch (type->kind) {
        case LocalType::Kind::End:
            return type;
        case LocalType::Kind::Var:
            return type->var == var ? replacement : type;
        case LocalType::Kind::Rec:
            // Shadowing is forbidden at construction, so an equal inner
            // binder means the variable is already this rec's own.
            if (type->var == var) return type;
            return LocalType::make_rec(type->var, substitute(type->body, var, replacement));
        case LocalType::Kind::Select:
        case LocalType::Kind::Branch: {
            std::vector<LocalChoice> choices;
            choices.reserve(type->choices.size());
            bool changed = false;
            for (const auto& c : type->choices) {
                LocalRef cont = substitute(c.cont, var, replacement);
                changed = changed || cont != c.cont;
                choices.push_back({c.label, c.sort, std::move(cont)});
            }
            if (!changed) return type;
            return type->kind == LocalType::Kind::Select
                       ? LocalType::make_select(type->peer, std::move(choices))
                       : LocalType::make_branch(type->peer, std::move(choices));
        }
    }
    return type;
}

LocalRef unfold(LocalRef type) {
    while (type->kind == LocalType::Kind::Rec)
        type = substitute(type->body, type->var, type);
    return type;
}

}  // namespace mpst
