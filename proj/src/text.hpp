// Tokenizer and constraint grammar shared by the model, formula, game and TM readers.
#pragma once

#include <string>
#include <vector>

#include "amu/atoms.hpp"

namespace amu::text {

struct Token {
    enum Kind { Ident, Number, Sym, End } kind = End;
    std::string s;
    int line = 1, col = 1;
};

std::vector<Token> tokenize(const std::string& src);

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}
    const Token& peek(int ahead = 0) const;
    Token next();
    bool at_end() const { return peek().kind == Token::End; }
    bool is(const std::string& sym) const;
    bool is_ident(const std::string& word) const;
    bool accept(const std::string& sym);
    bool accept_ident(const std::string& word);
    void expect(const std::string& sym);
    std::string ident();
    [[noreturn]] void fail(const std::string& msg) const;
    size_t pos() const { return i_; }
    void seek(size_t p) { i_ = p; }

    // disj := conj ('\/' conj)* ; conj := unary ('/\' unary)* ;
    // unary := '~' unary | '(' disj ')' | true | false | name rel name
    Constraint constraint();
    // Comma-separated identifiers inside optional parentheses.
    std::vector<std::string> arg_list();

private:
    std::vector<Token> t_;
    size_t i_ = 0;
    Constraint cunary();
};

// Splits into lines, dropping comments and blank lines; keeps line numbers.
struct Line {
    int number;
    std::string body;
};
std::vector<Line> lines(const std::string& src);

}  // namespace amu::text
