#pragma once

#include "koszulkit/ncalg.hpp"

#include <functional>

namespace kk {

// Operations m_i stored by input word (a_i ... a_1 in print order, so the word is
// composable as a tensor over the ground ring). Values are combinations of length-1
// words (basis generators) or idempotents. The unit is the sum of idempotents and
// acts strictly; it is never stored in the table.
struct AInfAlg {
    Quiver q;
    Field f;
    std::map<Word, Element> ops;
    std::map<int, Scalar> augmentation;  // generator -> value; absent means 0
    std::string side;                    // set by dualize

    Element m(const std::vector<Word>& inputs) const;  // inputs: letters or idempotents
    int max_arity() const;
    void set(const std::vector<std::string>& inputs, const Element& out);
};

// Delta(c) = sum_i Delta_i(c); a word of length i in the value is a term of Delta_i,
// written c_i ... c_1 in print order. Only the reduced coproducts are stored; the
// counital terms of Delta_2 are implicit.
struct AInfCoalg {
    Quiver q;
    Field f;
    std::map<int, Element> delta;
    std::string side;

    Element delta_i(int gen, size_t i) const;
    int max_arity() const;
    // total order with Delta(c_p) supported on earlier generators, if one exists
    std::optional<std::vector<int>> conilpotency_order() const;
};

// free DG algebra over a quiver, differential given on generators
struct FreeDGA {
    Quiver q;
    Field f;
    Derivation d;
    std::map<int, Scalar> augmentation;

    Element diff(const Element& x) const { return apply_derivation(q, d, x); }
    // m1 in the A-infinity normalisation: d a = (-1)^{|a|} m1(a)
    Element m1(const Element& x) const;
    // m2(a2, a1) = (-1)^{|a1|} a2 a1
    Element m2(const Element& a2, const Element& a1) const;
};

struct Witness {
    std::string where;
    std::string residue;
};

struct CheckResult {
    bool ok = true;
    std::vector<Witness> witnesses;
    size_t checked = 0;
};

CheckResult check_ainf(const AInfAlg& a, int max_arity);
CheckResult check_coainf(const AInfCoalg& c, int max_arity);
// d^2 on every generator of a free DG algebra
CheckResult check_d2_generators(const FreeDGA& a);

void validate_alg(const AInfAlg& a);
void validate_coalg(const AInfCoalg& c);

AInfAlg dualize(const AInfCoalg& c, Side side, const std::string& suffix = "v");
AInfCoalg dualize(const AInfAlg& a, Side side, const std::string& suffix = "v");

// conversions between field of definition (coefficients must be integral / p-integral)
AInfAlg to_field(const AInfAlg& a, Field f);
AInfCoalg to_field(const AInfCoalg& c, Field f);
FreeDGA to_field(const FreeDGA& a, Field f);

struct AugMap {
    std::map<int, Scalar> values;  // degree-0 loop generators only
};

// all augmentations of a free DG algebra over a prime field, by exhaustive search
std::vector<AugMap> enumerate_augmentations(const FreeDGA& a, Field f, size_t limit = 2000000);
bool is_augmentation(const FreeDGA& a, const AugMap& e);
Scalar eval_aug(const Quiver& q, const AugMap& e, const Element& x);

// sign audit: flips of structure-constant signs
struct SignEntry {
    std::string label;
    std::function<void(bool)> apply;  // apply(true) flips, apply(false) restores
};

struct SignRepair {
    bool precondition = true;  // mod-2 check passes
    bool already_ok = false;
    bool found = false;
    std::vector<std::string> flips;
    size_t tried = 0;
    std::string report;
};

SignRepair sign_repair(const AInfAlg& a, int max_arity, int budget);
SignRepair sign_repair(const AInfCoalg& c, int max_arity, int budget);
SignRepair sign_repair(const FreeDGA& a, int budget);

}  // namespace kk
