#include "mpst/dot.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace mpst {

namespace {

struct DotEdge {
    long long from;
    long long to;
    std::string label;
    std::size_t line, column;
};

class DotParser {
public:
    explicit DotParser(std::string_view text) : text_(text) {}

    Fsm run() {
        skip_trivia();
        expect_word("digraph");
        skip_trivia();
        if (peek_ident()) read_ident();  // optional graph name
        expect_char('{');

        std::map<long long, std::size_t> order;  // node id -> first-seen marker
        std::vector<DotEdge> edges;
        std::optional<std::string> role;

        for (;;) {
            skip_trivia();
            if (at_char('}')) {
                take();
                break;
            }
            if (pos_ >= text_.size())
                error(SourceError::Kind::Parse, "unexpected end of input inside digraph");

            std::size_t stmt_line = line_, stmt_col = column_;
            if (peek_ident()) {
                std::string word = read_ident();
                if (word == "graph" || word == "node" || word == "edge") {
                    // Attribute statement: consume a bracketed list, keeping role=.
                    skip_trivia();
                    expect_char('[');
                    auto attrs = read_attr_list();
                    if (word == "graph" && attrs.count("role")) role = attrs["role"];
                    skip_trivia();
                    if (at_char(';')) take();
                    continue;
                }
                if (word == "role") {
                    skip_trivia();
                    expect_char('=');
                    skip_trivia();
                    role = read_value();
                    skip_trivia();
                    if (at_char(';')) take();
                    continue;
                }
                throw SourceError(SourceError::Kind::Parse, stmt_line, stmt_col,
                                  "unexpected identifier '" + word + "'");
            }

            if (!std::isdigit(static_cast<unsigned char>(text_[pos_])))
                error(SourceError::Kind::Parse, "expected a node id");
            long long id = read_number();
            order.try_emplace(id, order.size());
            skip_trivia();
            if (at_char(';')) {
                take();
                continue;
            }
            if (at_char('-') && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                take();
                take();
                skip_trivia();
                if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    error(SourceError::Kind::Parse, "expected a target node id");
                long long target = read_number();
                order.try_emplace(target, order.size());
                skip_trivia();
                expect_char('[');
                auto attrs = read_attr_list();
                if (!attrs.count("label"))
                    throw SourceError(SourceError::Kind::Parse, stmt_line, stmt_col,
                                      "edge without a label attribute");
                edges.push_back({id, target, attrs["label"], stmt_line, stmt_col});
                skip_trivia();
                if (at_char(';')) take();
                continue;
            }
            error(SourceError::Kind::Parse, "expected ';' or '->' after node id");
        }
        skip_trivia();
        if (pos_ < text_.size())
            error(SourceError::Kind::Parse, "trailing input after digraph");

        if (!order.count(0))
            throw SourceError(SourceError::Kind::Validation, 1, 1,
                              "initial state (node 0) is missing");

        // Dense renumbering in ascending id order keeps node 0 initial.
        std::map<long long, std::size_t> index;
        for (const auto& [id, _] : order) index.emplace(id, index.size());

        Fsm fsm;
        if (role) fsm.role = {*role};
        fsm.initial = 0;
        fsm.states.resize(index.size());
        for (const DotEdge& e : edges) {
            Action action = parse_edge_label(e);
            fsm.states[index[e.from]].push_back({std::move(action), index[e.to]});
        }

        auto violations = validate_fsm(fsm);
        if (!violations.empty())
            throw SourceError(SourceError::Kind::Validation, 1, 1, violations.front());
        return fsm;
    }

private:
    Action parse_edge_label(const DotEdge& e) const {
        const std::string& s = e.label;
        std::size_t i = 0;
        auto ident_at = [&](std::size_t& j) {
            std::size_t begin = j;
            if (j < s.size() &&
                (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
                ++j;
                while (j < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                    ++j;
            }
            return s.substr(begin, j - begin);
        };
        Action action;
        action.peer.name = ident_at(i);
        if (action.peer.name.empty() || i >= s.size() || (s[i] != '!' && s[i] != '?'))
            throw SourceError(SourceError::Kind::Parse, e.line, e.column,
                              "malformed edge label '" + s + "' (expected ROLE!LABEL or ROLE?LABEL)");
        action.dir = s[i] == '!' ? Dir::Send : Dir::Receive;
        ++i;
        action.label = ident_at(i);
        if (action.label.empty())
            throw SourceError(SourceError::Kind::Parse, e.line, e.column,
                              "malformed edge label '" + s + "' (missing message label)");
        if (i < s.size() && s[i] == '(') {
            ++i;
            action.sort.name = ident_at(i);
            if (i >= s.size() || s[i] != ')')
                throw SourceError(SourceError::Kind::Parse, e.line, e.column,
                                  "malformed edge label '" + s + "' (unclosed sort)");
            ++i;
        }
        if (i != s.size())
            throw SourceError(SourceError::Kind::Parse, e.line, e.column,
                              "malformed edge label '" + s + "' (trailing characters)");
        return action;
    }

    std::map<std::string, std::string> read_attr_list() {
        std::map<std::string, std::string> attrs;
        for (;;) {
            skip_trivia();
            if (at_char(']')) {
                take();
                return attrs;
            }
            if (!peek_ident()) error(SourceError::Kind::Parse, "expected an attribute name");
            std::string key = read_ident();
            skip_trivia();
            expect_char('=');
            skip_trivia();
            attrs[key] = read_value();
            skip_trivia();
            if (at_char(',')) take();
        }
    }

    std::string read_value() {
        if (at_char('"')) {
            take();
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '"') value += take();
            if (pos_ >= text_.size())
                error(SourceError::Kind::Lex, "unterminated string");
            take();
            return value;
        }
        if (peek_ident()) return read_ident();
        error(SourceError::Kind::Parse, "expected a value");
    }

    bool peek_ident() const {
        return pos_ < text_.size() &&
               (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
    }

    std::string read_ident() {
        std::string out;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            out += take();
        return out;
    }

    long long read_number() {
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            out += take();
        return std::stoll(out);
    }

    void expect_word(const std::string& word) {
        if (!peek_ident()) error(SourceError::Kind::Parse, "expected '" + word + "'");
        std::size_t line = line_, column = column_;
        std::string got = read_ident();
        if (got != word)
            throw SourceError(SourceError::Kind::Parse, line, column,
                              "expected '" + word + "', found '" + got + "'");
    }

    void expect_char(char c) {
        skip_trivia();
        if (!at_char(c)) error(SourceError::Kind::Parse, std::string("expected '") + c + "'");
        take();
    }

    bool at_char(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_trivia() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                take();
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') take();
                continue;
            }
            return;
        }
    }

    [[noreturn]] void error(SourceError::Kind kind, const std::string& message) const {
        throw SourceError(kind, line_, column_, message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

}  // namespace

Fsm parse_fsm_dot(std::string_view text) {
    return DotParser(text).run();
}

std::string write_fsm_dot(const Fsm& fsm) {
    // Node 0 is the initial state by convention; renumber if needed.
    auto id = [&](std::size_t s) {
        if (s == fsm.initial) return std::size_t{0};
        return s < fsm.initial ? s + 1 : s;
    };
    std::string out = "digraph {\n";
    if (!fsm.role.name.empty()) {
        out += "  role=\"";
        out += fsm.role.name;
        out += "\";\n";
    }
    for (std::size_t s = 0; s < fsm.states.size(); ++s) {
        out += "  ";
        out += std::to_string(id(s));
        out += ";\n";
    }
    for (std::size_t s = 0; s < fsm.states.size(); ++s) {
        for (const auto& t : fsm.states[s]) {
            out += "  ";
            out += std::to_string(id(s));
            out += " -> ";
            out += std::to_string(id(t.target));
            out += " [label=\"";
            out += t.action.to_string();
            out += "\"];\n";
        }
    }
    out += "}\n";
    return out;
}

}  // namespace mpst
