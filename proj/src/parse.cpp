#include "mpst/parse.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mpst {

namespace {

enum class Tok {
    Ident,
    Number,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Dot,
    Bang,
    Query,
    Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        for (;;) {
            skip_trivia();
            if (pos_ >= text_.size()) {
                tokens.push_back({Tok::Eof, "", line_, column_});
                return tokens;
            }
            const std::size_t line = line_;
            const std::size_t column = column_;
            char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string ident;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    ident += advance();
                tokens.push_back({Tok::Ident, std::move(ident), line, column});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    num += advance();
                tokens.push_back({Tok::Number, std::move(num), line, column});
                continue;
            }
            Tok kind;
            switch (c) {
                case '(': kind = Tok::LParen; break;
                case ')': kind = Tok::RParen; break;
                case '{': kind = Tok::LBrace; break;
                case '}': kind = Tok::RBrace; break;
                case ';': kind = Tok::Semi; break;
                case ',': kind = Tok::Comma; break;
                case '.': kind = Tok::Dot; break;
                case '!': kind = Tok::Bang; break;
                case '?': kind = Tok::Query; break;
                default:
                    throw SourceError(SourceError::Kind::Lex, line, column,
                                      std::string("unexpected character '") + c + "'");
            }
            tokens.push_back({kind, std::string(1, advance()), line, column});
        }
    }

private:
    char advance() {
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
                advance();
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '*') {
                std::size_t line = line_, column = column_;
                advance();
                advance();
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
                    advance();
                if (pos_ + 1 >= text_.size())
                    throw SourceError(SourceError::Kind::Lex, line, column, "unterminated comment");
                advance();
                advance();
                continue;
            }
            return;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    Token next() {
        const Token& t = peek();
        if (t.kind != Tok::Eof) ++pos_;
        return t;
    }

    Token expect(Tok kind, const std::string& what) {
        const Token& t = peek();
        if (t.kind != kind)
            throw SourceError(SourceError::Kind::Parse, t.line, t.column,
                              "expected " + what + ", found '" + describe(t) + "'");
        return next();
    }

    Token expect_keyword(const std::string& word) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || t.text != word)
            throw SourceError(SourceError::Kind::Parse, t.line, t.column,
                              "expected '" + word + "', found '" + describe(t) + "'");
        return next();
    }

    bool at_keyword(const std::string& word) const {
        return peek().kind == Tok::Ident && peek().text == word;
    }

    static std::string describe(const Token& t) {
        return t.kind == Tok::Eof ? "end of input" : t.text;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

[[noreturn]] void fail(SourceError::Kind kind, const Token& at, const std::string& message) {
    throw SourceError(kind, at.line, at.column, message);
}

// --- global protocol DSL ----------------------------------------------

class GlobalParser {
public:
    explicit GlobalParser(TokenStream& ts) : ts_(ts) {}

    GlobalProtocol run() {
        ts_.expect_keyword("global");
        ts_.expect_keyword("protocol");
        GlobalProtocol protocol;
        protocol.name = ts_.expect(Tok::Ident, "protocol name").text;
        ts_.expect(Tok::LParen, "'('");
        for (;;) {
            Token kw = ts_.expect_keyword("role");
            Token name = ts_.expect(Tok::Ident, "role name");
            for (const Role& r : protocol.roles)
                if (r.name == name.text)
                    fail(SourceError::Kind::Validation, name, "duplicate role '" + name.text + "'");
            (void)kw;
            protocol.roles.push_back({name.text});
            if (ts_.peek().kind == Tok::Comma) {
                ts_.next();
                continue;
            }
            break;
        }
        ts_.expect(Tok::RParen, "')'");
        roles_ = protocol.roles;
        ts_.expect(Tok::LBrace, "'{'");
        protocol.type = parse_block();
        ts_.expect(Tok::RBrace, "'}'");
        ts_.expect(Tok::Eof, "end of input");
        return protocol;
    }

private:
    // A block is a sequence of statements ending at '}'. `rec`, `choice` and
    // `continue` close the block; an exhausted block means `end`.
    GlobalRef parse_block() {
        if (ts_.peek().kind == Tok::RBrace) return GlobalType::make_end();

        if (ts_.at_keyword("continue")) {
            Token kw = ts_.next();
            Token var = ts_.expect(Tok::Ident, "recursion label");
            ts_.expect(Tok::Semi, "';'");
            require_block_end(kw, "continue");
            if (std::find(rec_vars_.begin(), rec_vars_.end(), var.text) == rec_vars_.end())
                fail(SourceError::Kind::Validation, var, "unbound 'continue " + var.text + "'");
            return GlobalType::make_var(var.text);
        }

        if (ts_.at_keyword("rec")) {
            Token kw = ts_.next();
            Token var = ts_.expect(Tok::Ident, "recursion label");
            if (std::find(rec_vars_.begin(), rec_vars_.end(), var.text) != rec_vars_.end())
                fail(SourceError::Kind::Validation, var,
                     "recursion label '" + var.text + "' shadows an enclosing one");
            ts_.expect(Tok::LBrace, "'{'");
            rec_vars_.push_back(var.text);
            GlobalRef body = parse_block();
            rec_vars_.pop_back();
            ts_.expect(Tok::RBrace, "'}'");
            require_block_end(kw, "rec");
            GlobalRef stripped = body;
            while (stripped->kind == GlobalType::Kind::Rec) stripped = stripped->body;
            if (stripped->kind == GlobalType::Kind::Var)
                fail(SourceError::Kind::Validation, kw, "non-contractive 'rec " + var.text + "'");
            return GlobalType::make_rec(var.text, body);
        }

        if (ts_.at_keyword("choice")) {
            Token kw = ts_.next();
            ts_.expect_keyword("at");
            Token chooser = ts_.expect(Tok::Ident, "role name");
            require_role(chooser);
            std::vector<GlobalChoice> choices;
            Role receiver;
            for (;;) {
                ts_.expect(Tok::LBrace, "'{'");
                Token head = ts_.peek();
                GlobalRef block = parse_block();
                ts_.expect(Tok::RBrace, "'}'");
                if (block->kind != GlobalType::Kind::Msg || block->from.name != chooser.text)
                    fail(SourceError::Kind::Validation, head,
                         "choice branch must begin with a message from '" + chooser.text + "'");
                if (block->choices.size() != 1)
                    fail(SourceError::Kind::Validation, head,
                         "choice branch heading may not itself branch");
                if (choices.empty()) {
                    receiver = block->to;
                } else if (block->to != receiver) {
                    fail(SourceError::Kind::Validation, head,
                         "choice branches must share one receiver; found '" + block->to.name +
                             "' after '" + receiver.name + "'");
                }
                const auto& heading = block->choices.front();
                for (const auto& c : choices)
                    if (c.label == heading.label)
                        fail(SourceError::Kind::Validation, head,
                             "duplicate choice label '" + heading.label + "'");
                choices.push_back(heading);
                if (ts_.at_keyword("or")) {
                    ts_.next();
                    continue;
                }
                break;
            }
            if (choices.size() < 2)
                fail(SourceError::Kind::Parse, kw, "choice needs at least two branches");
            require_block_end(kw, "choice");
            return GlobalType::make_msg({chooser.text}, receiver, std::move(choices));
        }

        // Plain message: label(Sort?) from A to B; followed by the rest of
        // the block as its continuation.
        Token label = ts_.expect(Tok::Ident, "message label");
        Sort sort = parse_sort_suffix();
        ts_.expect_keyword("from");
        Token from = ts_.expect(Tok::Ident, "role name");
        ts_.expect_keyword("to");
        Token to = ts_.expect(Tok::Ident, "role name");
        ts_.expect(Tok::Semi, "';'");
        require_role(from);
        require_role(to);
        if (from.text == to.text)
            fail(SourceError::Kind::Validation, from, "self-message from '" + from.text + "'");
        GlobalRef cont = parse_block();
        return GlobalType::make_msg({from.text}, {to.text},
                                    {{label.text, std::move(sort), std::move(cont)}});
    }

    Sort parse_sort_suffix() {
        Sort sort;
        if (ts_.peek().kind == Tok::LParen) {
            ts_.next();
            if (ts_.peek().kind == Tok::Ident) sort.name = ts_.next().text;
            ts_.expect(Tok::RParen, "')'");
        }
        return sort;
    }

    void require_role(const Token& name) {
        for (const Role& r : roles_)
            if (r.name == name.text) return;
        fail(SourceError::Kind::Validation, name, "undeclared role '" + name.text + "'");
    }

    void require_block_end(const Token& at, const std::string& what) {
        if (ts_.peek().kind != Tok::RBrace)
            fail(SourceError::Kind::Parse, at,
                 "'" + what + "' must be the final statement of its block");
    }

    TokenStream& ts_;
    std::vector<Role> roles_;
    std::vector<std::string> rec_vars_;
};

// --- local type grammar ------------------------------------------------

class LocalParser {
public:
    explicit LocalParser(TokenStream& ts) : ts_(ts) {}

    LocalRef run() {
        LocalRef type = parse_type();
        ts_.expect(Tok::Eof, "end of input");
        return type;
    }

private:
    LocalRef parse_type() {
        Token head = ts_.peek();
        if (head.kind != Tok::Ident)
            fail(SourceError::Kind::Parse, head,
                 "expected a type, found '" + TokenStream::describe(head) + "'");

        if (head.text == "end") {
            ts_.next();
            return LocalType::make_end();
        }

        if (head.text == "rec") {
            ts_.next();
            Token var = ts_.expect(Tok::Ident, "recursion variable");
            if (std::find(rec_vars_.begin(), rec_vars_.end(), var.text) != rec_vars_.end())
                fail(SourceError::Kind::Validation, var,
                     "recursion variable '" + var.text + "' shadows an enclosing one");
            ts_.expect(Tok::Dot, "'.'");
            rec_vars_.push_back(var.text);
            LocalRef body = parse_type();
            rec_vars_.pop_back();
            LocalRef stripped = body;
            while (stripped->kind == LocalType::Kind::Rec) stripped = stripped->body;
            if (stripped->kind == LocalType::Kind::Var)
                fail(SourceError::Kind::Validation, head,
                     "non-contractive 'rec " + var.text + "'");
            return LocalType::make_rec(var.text, body);
        }

        ts_.next();
        if (ts_.peek().kind == Tok::Bang || ts_.peek().kind == Tok::Query) {
            bool send = ts_.next().kind == Tok::Bang;
            std::vector<LocalChoice> choices;
            if (ts_.peek().kind == Tok::LBrace) {
                ts_.next();
                for (;;) {
                    choices.push_back(parse_choice());
                    if (ts_.peek().kind == Tok::Comma) {
                        ts_.next();
                        continue;
                    }
                    break;
                }
                ts_.expect(Tok::RBrace, "'}'");
            } else {
                choices.push_back(parse_choice());
            }
            std::set<std::string> labels;
            for (const auto& c : choices)
                if (!labels.insert(c.label).second)
                    fail(SourceError::Kind::Validation, head, "duplicate label '" + c.label + "'");
            return send ? LocalType::make_select({head.text}, std::move(choices))
                        : LocalType::make_branch({head.text}, std::move(choices));
        }

        // Bare identifier: a recursion variable.
        if (std::find(rec_vars_.begin(), rec_vars_.end(), head.text) == rec_vars_.end())
            fail(SourceError::Kind::Validation, head, "unbound variable '" + head.text + "'");
        return LocalType::make_var(head.text);
    }

    LocalChoice parse_choice() {
        Token label = ts_.expect(Tok::Ident, "label");
        Sort sort;
        if (ts_.peek().kind == Tok::LParen) {
            ts_.next();
            if (ts_.peek().kind == Tok::Ident) sort.name = ts_.next().text;
            ts_.expect(Tok::RParen, "')'");
        }
        ts_.expect(Tok::Dot, "'.'");
        LocalRef cont = parse_type();
        return {label.text, std::move(sort), std::move(cont)};
    }

    TokenStream& ts_;
    std::vector<std::string> rec_vars_;
};

void format_into(const LocalRef& type, std::string& out) {
    switch (type->kind) {
        case LocalType::Kind::End:
            out += "end";
            return;
        case LocalType::Kind::Var:
            out += type->var;
            return;
        case LocalType::Kind::Rec:
            out += "rec ";
            out += type->var;
            out += " . ";
            format_into(type->body, out);
            return;
        case LocalType::Kind::Select:
        case LocalType::Kind::Branch: {
            out += type->peer.name;
            out += type->kind == LocalType::Kind::Select ? '!' : '?';
            if (type->choices.size() == 1) {
                const auto& c = type->choices.front();
                out += c.label;
                if (!c.sort.is_unit()) {
                    out += '(';
                    out += c.sort.name;
                    out += ')';
                }
                out += " . ";
                format_into(c.cont, out);
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& c : type->choices) {
                if (!first) out += ", ";
                first = false;
                out += c.label;
                if (!c.sort.is_unit()) {
                    out += '(';
                    out += c.sort.name;
                    out += ')';
                }
                out += " . ";
                format_into(c.cont, out);
            }
            out += '}';
            return;
        }
    }
}

}  // namespace

GlobalProtocol parse_global(std::string_view text) {
    TokenStream ts(Lexer(text).run());
    return GlobalParser(ts).run();
}

LocalRef parse_local(std::string_view text) {
    TokenStream ts(Lexer(text).run());
    return LocalParser(ts).run();
}

std::string format_local(const LocalRef& type) {
    std::string out;
    format_into(type, out);
    return out;
}

}  // namespace mpst
