#pragma once

#include "koszulkit/homology.hpp"

namespace kk {

// Bar construction of an augmented A-infinity algebra. Bar words are words over
// the algebra's quiver; the letter a sits in degree |a| - 1.
struct BarObject {
    AInfAlg src;
    size_t max_len = 0;

    int degree(const Word& w) const { return word_degree(src.q, w, -1); }
    Element b(const Word& w) const;
    // reduced deconcatenation, as pairs (left, right) with the sign of the right factor
    std::vector<std::tuple<Word, Word, Scalar>> delta2(const Word& w) const;
};

BarObject bar(const AInfAlg& a, size_t max_len);
ComplexSource bar_source(const BarObject& b);
// Bar words of length 1..max_len interned as generators (weight = length), with Delta_1 = b
// and Delta_2 the reduced deconcatenation
AInfCoalg bar_coalgebra(const AInfAlg& a, size_t max_len);

struct CobarObject {
    AInfCoalg src;
    FreeDGA alg;  // generator s^{-1}c keeps the name of c and has degree |c| + 1
    std::optional<size_t> completed_len;
};

CobarObject cobar(const AInfCoalg& c);
CobarObject completed_cobar(const AInfCoalg& c, size_t max_len);
// the quotient by words longer than max_len is a complex; this is its window
ChainWindow cobar_window(const CobarObject& o, int dmin, int dmax, std::optional<size_t> max_len = std::nullopt);

// number of cobar words per (degree, length)
std::map<std::pair<int, size_t>, size_t> length_table(const CobarObject& o, int dmin, int dmax, size_t max_len);

struct Stabilization {
    std::vector<std::pair<size_t, std::map<int, int>>> rows;  // (length, betti)
    bool stable = false;                                        // last two rows agree
    std::string note;
};
Stabilization stabilization(const CobarObject& o, int dmin, int dmax, const std::vector<size_t>& lens);

// a degree +1 map from the generators of a coalgebra to a free DG algebra
struct TwistingCochain {
    Quiver src;
    Field f;
    std::map<int, Element> t;  // values are elements of the target algebra
};

TwistingCochain universal_cochain(const CobarObject& o);  // c -> s^{-1}c
// t_A : Bar A -> A on the interned bar coalgebra: [a] -> a, longer words -> 0
std::map<int, Element> universal_bar_cochain(const AInfCoalg& barc, const AInfAlg& a);

// multiplicative extension of generator images between free algebras
Element apply_algebra_map(const Quiver& tgt, const std::map<int, Element>& images, const Element& x, Field f);
// f m1 = m1 f on generators (both sides in the m1 normalisation)
CheckResult check_dga_map(const FreeDGA& src, const FreeDGA& tgt, const std::map<int, Element>& images);
// the DG-algebra map Omega C -> A induced by a twisting cochain C -> A
std::map<int, Element> induced_map(const CobarObject& o, const TwistingCochain& t);

// words of a free DG algebra up to a length interned as an A-infinity algebra with m1, m2;
// products longer than max_len are dropped (a quotient DG algebra)
AInfAlg as_ainf(const FreeDGA& a, size_t max_len);

struct Comparison {
    ChainWindow src, tgt;
    ChainMap map;
    QuasiIso verdict;
};
// Omega Bar A -> A for a DG algebra A (m_i = 0 for i >= 3), bar words of total length <= bar_len
Comparison counit_map(const AInfAlg& a, size_t bar_len, int dmin, int dmax);
// C -> Bar Omega C, with Omega C truncated at inner_len and the bar window derived from degrees
Comparison unit_map(const AInfCoalg& c, size_t inner_len, int dmin, int dmax, std::optional<size_t> bar_len = std::nullopt);

}  // namespace kk
