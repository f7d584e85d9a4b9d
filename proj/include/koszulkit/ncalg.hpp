#pragma once

#include "koszulkit/ground.hpp"
#include "koszulkit/scalars.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kk {

class algebra_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// graded quiver: the ground ring plus arrows (generators)
struct Quiver {
    GroundRing ring;
    std::vector<GenSymbol> gens;

    int find(const std::string& name) const;
    int gen(const std::string& name) const;  // throws if absent
    int nv() const { return ring.size(); }
};

// a composable word read left to right: dst(g_i) == src(g_{i+1});
// the empty word is the idempotent e_v
struct Word {
    std::vector<int> g;
    int v = -1;  // vertex, only for the empty word

    static Word idem(int v) { return {{}, v}; }
    static Word letter(int i) { return {{i}, -1}; }
    bool empty() const { return g.empty(); }
    size_t len() const { return g.size(); }
    // ordering: length, then lex by generator declaration order
    auto operator<=>(const Word& o) const {
        if (g.size() != o.g.size()) return g.size() <=> o.g.size();
        if (auto c = g <=> o.g; c != 0) return c;
        return v <=> o.v;
    }
    bool operator==(const Word&) const = default;
};

int word_src(const Quiver& q, const Word& w);
int word_dst(const Quiver& q, const Word& w);
int word_degree(const Quiver& q, const Word& w, int shift = 0);
std::string word_str(const Quiver& q, const Word& w, const std::string& sep = "");
// concatenation; nullopt if not composable
std::optional<Word> concat(const Quiver& q, const Word& a, const Word& b);

class Element {
  public:
    Element() = default;
    explicit Element(Field f) : f_(f) {}
    Element(Field f, const Word& w, const Scalar& c) : f_(f) { add(w, c); }
    static Element word(Field f, const Word& w, long c = 1) { return Element(f, w, Scalar(f, c)); }

    const Field& field() const { return f_; }
    const std::map<Word, Scalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    Scalar coeff(const Word& w) const;
    void add(const Word& w, const Scalar& c);
    void add(const Element& o, const Scalar& c);
    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator-() const;
    Element operator*(const Scalar& c) const;
    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    bool operator==(const Element& o) const { return f_ == o.f_ && t_ == o.t_; }
    bool operator!=(const Element& o) const { return !(*this == o); }
    size_t max_len() const;
    Element to_field(Field f) const;  // reduce coefficients (Q -> GF(p)), integer coefficients only

  private:
    Field f_;
    std::map<Word, Scalar> t_;
};

std::string elem_str(const Quiver& q, const Element& x, const std::string& sep = "");

// path algebra product: bilinear concatenation, non-composable pairs give 0
Element mul(const Quiver& q, const Element& a, const Element& b);
Element idempotent(const Quiver& q, Field f, int v);

enum class Leibniz {
    Left,   // d(a2 a1) = (d a2) a1 + (-1)^{|a2|} a2 (d a1)
    Right,  // d(a2 a1) = (-1)^{|a1|} (d a2) a1 + a2 (d a1)
};

struct Derivation {
    std::map<int, Element> images;  // generator index -> image
    int degree = 1;
    Leibniz rule = Leibniz::Left;
};

Element apply_derivation(const Quiver& q, const Derivation& d, const Element& x);
Element apply_derivation(const Quiver& q, const Derivation& d, const Word& w, Field f);

// algebra map determined by generator images; generators absent from subst are fixed
Element gen_automorphism(const Quiver& q, const std::map<int, Element>& subst, const Element& x);
void check_substitution(const Quiver& q, const std::map<int, Element>& subst);

struct RewriteRule {
    Word lhs;
    Element rhs;
};

struct NormalForm {
    Element nf;
    bool stable = true;
};

NormalForm normal_form(const Quiver& q, const std::vector<RewriteRule>& rules, const Element& x, size_t max_len,
                       size_t step_limit = 200000);

// all composable words of the given degree and length <= max_len; per-letter degree shift
// src/dst < 0 means unconstrained; the empty word appears for degree 0 (one per vertex)
std::vector<Word> enumerate_words(const Quiver& q, int degree, size_t max_len, int shift = 0, int src = -1,
                                  int dst = -1, bool include_idempotents = true);

struct PrimitiveResult {
    std::optional<Element> primitive;
    size_t candidates = 0;
    bool target_closed = true;
};

PrimitiveResult find_primitive(const Quiver& q, const Derivation& d, const Element& target, int degree,
                               size_t max_len);

// homogeneous degree of an element, nullopt if zero or inhomogeneous
std::optional<int> elem_degree(const Quiver& q, const Element& x);

}  // namespace kk
