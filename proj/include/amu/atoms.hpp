// Atoms, support contexts, constraints and complete types.
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace amu {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Sort { Equality, Ordered };
const char* sort_name(Sort s);

// Exact rational, normalized (den > 0, gcd 1). Equality atoms use den == 1.
class Rational {
public:
    Rational(int64_t n = 0, int64_t d = 1);
    int64_t num() const { return n_; }
    int64_t den() const { return d_; }
    std::string str() const;
    static Rational parse(const std::string& s);
    friend bool operator==(const Rational& a, const Rational& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

private:
    int64_t n_, d_;
};
using Atom = Rational;

struct Context {
    Sort sort = Sort::Equality;
    std::vector<std::string> names;
    std::vector<Atom> witnesses;
    int size() const { return static_cast<int>(names.size()); }
    int find(const std::string& name) const;
};
using CtxPtr = std::shared_ptr<const Context>;

// Validates names and witnesses; throws InputError.
CtxPtr make_context(Sort s, std::vector<std::string> names, std::vector<Atom> witnesses);
// Witnesses 1..k in declaration order.
CtxPtr make_context(Sort s, std::vector<std::string> names = {});
// Context with only the listed constants (indices into c), order kept.
CtxPtr sub_context(const Context& c, const std::vector<int>& keep);
bool same_context(const Context& a, const Context& b);

// Canonical orbit certificate over k constants followed by n variables.
// lab[i] is a block label: Equality blocks are numbered by first occurrence
// (so constants get 0..k-1), Ordered labels are dense ranks.
struct Type {
    uint8_t k = 0;
    std::vector<uint8_t> lab;
    int nvars() const { return static_cast<int>(lab.size()) - k; }
    int var(int i) const { return lab[k + i]; }
    friend bool operator==(const Type&, const Type&) = default;
    friend auto operator<=>(const Type&, const Type&) = default;
};

struct TypeHash {
    size_t operator()(const Type& t) const;
};

Type normalize(Sort s, int k, const std::vector<int>& keys);
Type type_of(const Context& c, const std::vector<Atom>& tuple);
Type base_type(const Context& c);
// New type with the same constants whose variables are the given positions
// of t (positions < k denote constants). Repeats are allowed.
Type select(Sort s, const Type& t, const std::vector<int>& pos);
// Keep only the listed constants (by index); variables are kept.
Type restrict_consts(Sort s, const Type& t, const std::vector<int>& keep);
Type project_exists(Sort s, const Type& t, const std::vector<int>& drop_vars);
// Calls f on every type over nvars()+m variables extending t.
void extend(Sort s, const Type& t, int m, const std::function<void(const Type&)>& f);
std::vector<Type> extensions(Sort s, const Type& t, int m);
std::vector<Type> all_types(const Context& c, int n);
// Atoms for all k+n positions / for the variables only.
std::vector<Atom> realize(const Context& c, const Type& t);
std::vector<Atom> witness(const Context& c, const Type& t);

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };
const char* rel_str(Rel r);
Rel flip(Rel r);
Rel negate(Rel r);

struct Constraint {
    enum class K { True, False, Lit, And, Or, Not };
    K kind = K::True;
    Rel rel = Rel::Eq;
    std::string lhs, rhs;
    std::vector<Constraint> kids;

    static Constraint truth() { return {}; }
    static Constraint falsity();
    static Constraint lit(std::string a, Rel r, std::string b);
    static Constraint conj(std::vector<Constraint> cs);
    static Constraint disj(std::vector<Constraint> cs);
    static Constraint neg(Constraint c);
    bool is_true() const { return kind == K::True; }
    void names(std::vector<std::string>& out) const;
    bool uses_order() const;
    std::string str() const;
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Constraint resolved against a variable list and a context; evaluated on
// types over (k constants, vars).
class CompiledConstraint {
public:
    CompiledConstraint() = default;
    CompiledConstraint(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx);
    bool eval(const Type& t) const;

private:
    struct Node {
        Constraint::K kind;
        Rel rel;
        int a, b;
        std::vector<int> kids;
    };
    Sort sort_ = Sort::Equality;
    std::vector<Node> nodes_;
    bool ev(int i, const Type& t) const;
};

bool satisfiable(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx);
std::vector<Type> complete(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx);
bool holds_on(const Constraint& c, const std::vector<std::string>& vars, const Context& ctx,
              const std::vector<Atom>& values);
// The type written as a constraint over the given variable names.
Constraint type_constraint(const Context& c, const Type& t, const std::vector<std::string>& vars);

}  // namespace amu
