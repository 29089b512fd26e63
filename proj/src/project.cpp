#include "mpst/project.hpp"

#include <deque>
#include <unordered_map>

#include "mpst/parse.hpp"

namespace mpst {

namespace {

bool free_in(const LocalRef& type, const std::string& var) {
    switch (type->kind) {
        case LocalType::Kind::End:
            return false;
        case LocalType::Kind::Var:
            return type->var == var;
        case LocalType::Kind::Rec:
            return type->var != var && free_in(type->body, var);
        case LocalType::Kind::Select:
        case LocalType::Kind::Branch:
            for (const auto& c : type->choices)
                if (free_in(c.cont, var)) return true;
            return false;
    }
    return false;
}

std::string join_path(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) {
        if (!out.empty()) out += '/';
        out += p;
    }
    return out;
}

LocalRef project_at(const GlobalRef& g, const Role& role, std::vector<std::string>& path) {
    switch (g->kind) {
        case GlobalType::Kind::End:
            return LocalType::make_end();
        case GlobalType::Kind::Var:
            return LocalType::make_var(g->var);
        case GlobalType::Kind::Rec: {
            LocalRef body = project_at(g->body, role, path);
            if (body->kind == LocalType::Kind::Var && body->var == g->var)
                return LocalType::make_end();
            if (!free_in(body, g->var)) return body;
            return LocalType::make_rec(g->var, body);
        }
        case GlobalType::Kind::Msg: {
            std::vector<LocalChoice> choices;
            choices.reserve(g->choices.size());
            for (const auto& c : g->choices) {
                path.push_back(c.label);
                LocalRef cont = project_at(c.cont, role, path);
                path.pop_back();
                choices.push_back({c.label, c.sort, std::move(cont)});
            }
            if (g->from == role) return LocalType::make_select(g->to, std::move(choices));
            if (g->to == role) return LocalType::make_branch(g->from, std::move(choices));
            // Plain merge: a third party must behave identically in every branch.
            for (std::size_t i = 1; i < choices.size(); ++i) {
                if (!structural_equal(choices[i].cont, choices.front().cont))
                    throw ProjectionError(role, join_path(path),
                                          ProjectionError::Reason::UnmergeableBranches);
            }
            return choices.front().cont;
        }
    }
    return LocalType::make_end();
}

}  // namespace

LocalRef project(const GlobalRef& global, const Role& role) {
    std::vector<std::string> path;
    return project_at(global, role, path);
}

Fsm local_to_fsm(const LocalRef& type, Role owner) {
    Fsm fsm;
    fsm.role = std::move(owner);
    fsm.initial = 0;

    // States are closed head-normal unfoldings, identified by their
    // canonical rendering; contractivity keeps the closure finite.
    std::unordered_map<std::string, std::size_t> index;
    std::deque<std::pair<std::size_t, LocalRef>> queue;

    auto state_of = [&](const LocalRef& closed) {
        LocalRef head = unfold(closed);
        std::string key = format_local(head);
        auto [it, inserted] = index.emplace(std::move(key), fsm.states.size());
        if (inserted) {
            fsm.states.emplace_back();
            queue.emplace_back(it->second, head);
        }
        return it->second;
    };

    state_of(type);
    while (!queue.empty()) {
        auto [state, head] = queue.front();
        queue.pop_front();
        if (head->kind == LocalType::Kind::End) continue;
        const Dir dir = head->kind == LocalType::Kind::Select ? Dir::Send : Dir::Receive;
        for (const auto& c : head->choices) {
            std::size_t target = state_of(c.cont);
            fsm.states[state].push_back({{dir, head->peer, c.label, c.sort}, target});
        }
    }
    return fsm;
}

}  // namespace mpst
