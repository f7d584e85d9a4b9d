#pragma once
// Hand-built structures for tests, typed in directly rather than read through the DSL.

#include "koszulkit/ainfty.hpp"

namespace fx {

using namespace kk;

inline Quiver make_quiver(std::vector<std::string> vs, std::vector<std::tuple<const char*, int, int, int>> gens) {
    Quiver q;
    q.ring.vertices = vs;
    q.ring.decoration.assign(vs.size(), '-');
    for (auto& [n, s, d, deg] : gens) q.gens.push_back({n, s, d, deg, {}});
    return q;
}

inline Element W(const Quiver& q, std::initializer_list<const char*> names, long c = 1, Field f = Field::Q()) {
    Word w;
    for (auto n : names) w.g.push_back(q.gen(n));
    return Element::word(f, w, c);
}

inline Element E(int v, long c = 1, Field f = Field::Q()) { return Element::word(f, Word::idem(v), c); }

// LC_*(Hopf link), coalgebra degrees
inline AInfCoalg hopf_lc() {
    AInfCoalg c;
    c.f = Field::Q();
    c.q = make_quiver({"1", "2"}, {{"c1", 0, 0, -2},
                                   {"c2", 1, 1, -2},
                                   {"c12", 0, 1, -1},
                                   {"c21", 1, 0, -1},
                                   {"s1", 0, 0, -1},
                                   {"t1", 0, 0, -1},
                                   {"k1", 0, 0, -2},
                                   {"l1", 0, 0, -2},
                                   {"u1", 0, 0, -3}});
    c.q.ring.decoration = {'+', '-'};
    auto& q = c.q;
    auto set = [&](const char* g, Element e) { c.delta[q.gen(g)] = e; };
    set("c1", W(q, {"s1"}) + W(q, {"c12", "c21"}));
    set("c2", W(q, {"c21", "c12"}));
    set("k1", W(q, {"s1"}) + W(q, {"t1"}) - W(q, {"s1", "t1"}));
    set("l1", W(q, {"s1"}) + W(q, {"t1"}) - W(q, {"t1", "s1"}));
    set("u1", W(q, {"l1"}) - W(q, {"k1"}) + W(q, {"k1", "s1"}) - W(q, {"s1", "l1"}));
    return c;
}

// LA^*(Hopf) exactly as printed
inline AInfAlg hopf_la_printed() {
    AInfAlg a;
    a.f = Field::Q();
    a.q = make_quiver({"1", "2"}, {{"c1v", 0, 0, 2},
                                   {"c2v", 1, 1, 2},
                                   {"c12v", 1, 0, 1},
                                   {"c21v", 0, 1, 1},
                                   {"s1v", 0, 0, 1},
                                   {"t1v", 0, 0, 1},
                                   {"k1v", 0, 0, 2},
                                   {"l1v", 0, 0, 2},
                                   {"u1v", 0, 0, 3}});
    auto& q = a.q;
    a.set({"s1v"}, W(q, {"c1v"}) + W(q, {"k1v"}) + W(q, {"l1v"}));
    a.set({"t1v"}, W(q, {"k1v"}) + W(q, {"l1v"}));
    a.set({"k1v"}, W(q, {"u1v"}, -1));
    a.set({"l1v"}, W(q, {"u1v"}));
    a.set({"c12v", "c21v"}, W(q, {"c2v"}));
    a.set({"c21v", "c12v"}, W(q, {"c1v"}));
    a.set({"t1v", "s1v"}, W(q, {"k1v"}, -1));
    a.set({"s1v", "t1v"}, W(q, {"l1v"}, -1));
    a.set({"k1v", "s1v"}, W(q, {"u1v"}));
    a.set({"s1v", "l1v"}, W(q, {"u1v"}, -1));
    return a;
}

// CF^*(Hopf): only m2(a12, a21) = a2
inline AInfAlg hopf_cf() {
    AInfAlg a;
    a.f = Field::Q();
    a.q = make_quiver({"1", "2"}, {{"a12", 1, 0, 1}, {"a21", 0, 1, 1}, {"a2", 1, 1, 2}});
    a.set({"a12", "a21"}, W(a.q, {"a2"}));
    return a;
}

// CE^*(Hopf), first printed differential, algebra degrees
inline FreeDGA hopf_ce() {
    FreeDGA a;
    a.f = Field::Q();
    a.q = make_quiver({"1", "2"}, {{"c1", 0, 0, -1},
                                   {"c2", 1, 1, -1},
                                   {"c12", 0, 1, 0},
                                   {"c21", 1, 0, 0},
                                   {"s1", 0, 0, 0},
                                   {"t1", 0, 0, 0},
                                   {"k1", 0, 0, -1},
                                   {"l1", 0, 0, -1},
                                   {"u1", 0, 0, -2}});
    auto& q = a.q;
    for (size_t i = 0; i < q.gens.size(); ++i) a.d.images[(int)i] = Element(a.f);
    a.d.images[q.gen("c1")] = E(0) + W(q, {"s1"}) + W(q, {"c12", "c21"});
    a.d.images[q.gen("c2")] = W(q, {"c21", "c12"});
    a.d.images[q.gen("k1")] = E(0) - W(q, {"s1", "t1"});
    a.d.images[q.gen("l1")] = E(0) - W(q, {"t1", "s1"});
    a.d.images[q.gen("u1")] = W(q, {"k1", "s1"}) - W(q, {"s1", "l1"});
    return a;
}

// the printed twisting cochain LC_*(Hopf) -> Omega CF_*, on the quiver of CF_*
inline std::map<int, Element> hopf_twist(const AInfCoalg& lc, const Quiver& cf) {
    std::map<int, Element> t;
    auto set = [&](const char* g, Element e) { t[lc.q.gen(g)] = e; };
    for (size_t g = 0; g < lc.q.gens.size(); ++g) t[(int)g] = Element(Field::Q());
    set("c2", W(cf, {"a2v"}));
    set("c12", W(cf, {"a12v"}));
    set("c21", W(cf, {"a21v"}));
    set("s1", W(cf, {"a12v", "a21v"}, -1));
    set("t1", W(cf, {"a12v", "a21v"}));
    set("k1", W(cf, {"a12v", "a2v", "a21v"}));
    set("l1", W(cf, {"a12v", "a2v", "a21v"}));
    set("u1", W(cf, {"a12v", "a2v", "a2v", "a21v"}));
    return t;
}

inline FreeDGA trefoil() {
    FreeDGA a;
    a.f = Field::Q();
    a.q = make_quiver({"1"}, {{"c1", 0, 0, -1}, {"c2", 0, 0, -1}, {"b1", 0, 0, 0}, {"b2", 0, 0, 0}, {"b3", 0, 0, 0}});
    auto& q = a.q;
    for (size_t i = 0; i < q.gens.size(); ++i) a.d.images[(int)i] = Element(a.f);
    a.d.images[q.gen("c1")] = E(0) + W(q, {"b1"}) + W(q, {"b3"}) + W(q, {"b3", "b2", "b1"});
    a.d.images[q.gen("c2")] = E(0, -1) - W(q, {"b1"}) - W(q, {"b3"}) - W(q, {"b1", "b2", "b3"});
    return a;
}

}  // namespace fx
