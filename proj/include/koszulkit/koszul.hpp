#pragma once

#include "koszulkit/barcobar.hpp"

namespace kk {

// How the equations of a twisting cochain are read.
//   Printed: d t(c) = sum over the terms of Delta(c) of t(c_d)...t(c_1), with d the
//            target's generator images read by the Left rule and plain products.
//   Koszul:  m1 t - t Delta_1 + sum_{d>=2} (-1)^d m2^(d) t^{(x)d} Delta_d = 0 in the
//            A-infinity normalisation, Koszul signs on t^{(x)d}.
enum class TwistConvention { Printed, Koszul };

std::string convention_name(TwistConvention c);
TwistConvention parse_convention(const std::string& s);

// a DG algebra: free on a quiver (e.g. a cobar), or finite with m_i = 0 for i >= 3
struct DGTarget {
    Quiver q;
    Field f;
    std::optional<FreeDGA> free;
    std::optional<AInfAlg> fin;
    std::map<int, Scalar> augmentation;
};

DGTarget dg_target(const FreeDGA& a);
DGTarget dg_target(const AInfAlg& a);  // throws for A-infinity algebras with m_i, i >= 3

struct Twist {
    AInfCoalg src;
    DGTarget tgt;
    std::map<int, Element> t;  // generator of src -> element of tgt; absent means 0
    TwistConvention conv = TwistConvention::Printed;

    Element value(int g) const;
};

// c -> s^{-1}c into the cobar
Twist universal_twist(const CobarObject& o);
// [a] -> a from the interned bar coalgebra (words up to max_len) into a DG algebra
Twist universal_bar_twist(const AInfAlg& a, size_t max_len);

struct TwistEquation {
    std::string gen;
    std::string text;  // the equation, as it reads in the chosen convention
    bool ok = true;
    std::string residue;
};

struct TwistReport {
    bool ok = true;
    TwistConvention conv = TwistConvention::Printed;
    std::vector<TwistEquation> equations;  // one per source generator
    std::vector<Witness> residues;
};

TwistReport verify_twist(const Twist& t);
// the same equation computed through the ordinary DG structure (used to cross-check Koszul)
std::map<int, Element> ordinary_residues(const Twist& t);

enum class TensorShape { AC, CA, ACA };
std::string shape_name(TensorShape s);
TensorShape parse_shape(const std::string& s);

// the twisted tensor product as a lazily described complex; no verification
ComplexSource twisted_source(TensorShape shape, const Twist& t);
// verifies t first and d^t d^t = 0 on the window afterwards; throws algebra_error otherwise
ChainWindow twisted_tensor(TensorShape shape, const Twist& t, int dmin, int dmax, std::optional<size_t> max_len);

enum class KoszulVerdict { AcyclicInWindow, Fails, Inconclusive };
std::string verdict_name(KoszulVerdict v);

struct KoszulResult {
    KoszulVerdict verdict = KoszulVerdict::Inconclusive;
    std::string detail;
    std::map<int, int> betti;
    std::map<int, int> expected;
    std::map<int, bool> certified;
    std::optional<std::pair<int, std::string>> witness;  // degree and a cycle that is not a boundary
};

// homology of A (x)^t C against the ground ring in degree 0; window-relative
KoszulResult koszulity_verdict(const Twist& t, int dmin, int dmax, std::optional<size_t> max_len);

}  // namespace kk
