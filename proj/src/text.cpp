#include "text.hpp"

#include <cctype>

namespace amu::text {

static const char* kSyms[] = {":=", "->", "<>", "[]", "<=", ">=", "!=", "/\\", "\\/", "(", ")", ",", ":", "<",
                              ">",  "=",  "~",  ".",  "{",  "}",  ";",  "|",  "*",   "[",   "]", "&", "!"};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto adv = [&](size_t n) {
        for (size_t j = 0; j < n; ++j, ++i) {
            if (src[i] == '\n') ++line, col = 1;
            else ++col;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                      src[j] == '\''))
                ++j;
            t.kind = Token::Ident;
            t.s = src.substr(i, j - i);
            adv(j - i);
            out.push_back(t);
            continue;
        }
        bool neg = c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]));
        if (std::isdigit(static_cast<unsigned char>(c)) || neg) {
            size_t j = i + (neg ? 1 : 0);
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j + 1 < src.size() && src[j] == '/' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            t.kind = Token::Number;
            t.s = src.substr(i, j - i);
            adv(j - i);
            out.push_back(t);
            continue;
        }
        bool found = false;
        for (const char* s : kSyms) {
            std::string sym(s);
            if (src.compare(i, sym.size(), sym) == 0) {
                t.kind = Token::Sym;
                t.s = sym;
                adv(sym.size());
                out.push_back(t);
                found = true;
                break;
            }
        }
        if (!found)
            throw InputError("line " + std::to_string(line) + ", col " + std::to_string(col) +
                             ": unexpected character '" + std::string(1, c) + "'");
    }
    Token e;
    e.line = line;
    e.col = col;
    out.push_back(e);
    return out;
}

const Token& Parser::peek(int ahead) const {
    size_t j = std::min(i_ + ahead, t_.size() - 1);
    return t_[j];
}

Token Parser::next() {
    Token t = peek();
    if (i_ < t_.size() - 1) ++i_;
    return t;
}

bool Parser::is(const std::string& sym) const { return peek().kind == Token::Sym && peek().s == sym; }
bool Parser::is_ident(const std::string& w) const { return peek().kind == Token::Ident && peek().s == w; }

bool Parser::accept(const std::string& sym) {
    if (!is(sym)) return false;
    next();
    return true;
}

bool Parser::accept_ident(const std::string& w) {
    if (!is_ident(w)) return false;
    next();
    return true;
}

void Parser::expect(const std::string& sym) {
    if (!accept(sym)) fail("expected '" + sym + "'");
}

std::string Parser::ident() {
    if (peek().kind != Token::Ident) fail("expected identifier");
    return next().s;
}

void Parser::fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Token::End ? "end of input" : "'" + t.s + "'";
    throw InputError("line " + std::to_string(t.line) + ", col " + std::to_string(t.col) + ": " + msg +
                     " (found " + got + ")");
}

Constraint Parser::constraint() {
    std::vector<Constraint> ds{[&] {
        std::vector<Constraint> cs{cunary()};
        while (accept("/\\")) cs.push_back(cunary());
        return Constraint::conj(cs);
    }()};
    while (accept("\\/")) {
        std::vector<Constraint> cs{cunary()};
        while (accept("/\\")) cs.push_back(cunary());
        ds.push_back(Constraint::conj(cs));
    }
    return Constraint::disj(ds);
}

Constraint Parser::cunary() {
    if (accept("~")) return Constraint::neg(cunary());
    if (accept("(")) {
        Constraint c = constraint();
        expect(")");
        return c;
    }
    if (accept_ident("true")) return Constraint::truth();
    if (accept_ident("false")) return Constraint::falsity();
    std::string a = ident();
    Rel r;
    if (accept("=")) r = Rel::Eq;
    else if (accept("!=")) r = Rel::Ne;
    else if (accept("<")) r = Rel::Lt;
    else if (accept("<=")) r = Rel::Le;
    else if (accept(">")) r = Rel::Gt;
    else if (accept(">=")) r = Rel::Ge;
    else fail("expected a comparison");
    std::string b = ident();
    return Constraint::lit(a, r, b);
}

std::vector<std::string> Parser::arg_list() {
    std::vector<std::string> out;
    if (!accept("(")) return out;
    if (accept(")")) return out;
    out.push_back(ident());
    while (accept(",")) out.push_back(ident());
    expect(")");
    return out;
}

std::vector<Line> lines(const std::string& src) {
    std::vector<Line> out;
    int n = 0;
    size_t i = 0;
    while (i <= src.size()) {
        size_t j = src.find('\n', i);
        if (j == std::string::npos) j = src.size();
        ++n;
        std::string l = src.substr(i, j - i);
        size_t h = l.find('#');
        if (h != std::string::npos) l.erase(h);
        if (l.find_first_not_of(" \t\r") != std::string::npos) out.push_back({n, l});
        i = j + 1;
    }
    return out;
}

}  // namespace amu::text
