#include "koszulkit/ground.hpp"

#include <set>

namespace kk {

int GroundRing::index(const std::string& v) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == v) return (int)i;
    return -1;
}

int GradedModule::find(const std::string& name) const {
    for (size_t i = 0; i < generators.size(); ++i)
        if (generators[i].name == name) return (int)i;
    return -1;
}

std::pair<GroundRing, GradedModule> build_ground(const std::vector<std::string>& vertices,
                                                 const std::vector<char>& decorations,
                                                 const std::vector<GenSpec>& generators) {
    GroundRing k;
    std::set<std::string> seen;
    for (size_t i = 0; i < vertices.size(); ++i) {
        if (!seen.insert(vertices[i]).second) throw ground_error("duplicate vertex: " + vertices[i]);
        char dec = i < decorations.size() ? decorations[i] : '-';
        if (dec != '+' && dec != '-') throw ground_error("bad decoration for vertex " + vertices[i]);
        k.vertices.push_back(vertices[i]);
        k.decoration.push_back(dec);
    }
    GradedModule m;
    std::set<std::string> names;
    for (auto& g : generators) {
        if (!names.insert(g.name).second) throw ground_error("duplicate generator: " + g.name);
        int s = k.index(g.src), d = k.index(g.dst);
        if (s < 0) throw ground_error("generator " + g.name + ": unknown vertex " + g.src);
        if (d < 0) throw ground_error("generator " + g.name + ": unknown vertex " + g.dst);
        m.generators.push_back({g.name, s, d, g.degree, g.weight});
    }
    return {k, m};
}

GradedModule dual_module(const GradedModule& m, Side side, const std::string& suffix) {
    // both sides transpose endpoints; they differ only in which factor the
    // pairing evaluates first, which matters for structure maps, not for generator data
    (void)side;
    GradedModule out;
    out.includes_idempotents = m.includes_idempotents;
    for (auto& g : m.generators) {
        GenSymbol d = g;
        std::string n = g.name;
        if (!suffix.empty() && n.size() > suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0)
            n = n.substr(0, n.size() - suffix.size());
        else
            n += suffix;
        d.name = n;
        d.degree = -g.degree;
        std::swap(d.src, d.dst);
        out.generators.push_back(d);
    }
    return out;
}

ModulePredicates module_predicates(const GradedModule& m, int n_vertices) {
    ModulePredicates p;
    std::map<int, int> count;
    for (auto& g : m.generators) count[g.degree]++;
    bool neg = true, pos = true;
    for (auto& [d, n] : count) {
        if (d > 0) neg = false;
        if (d < 0) pos = false;
    }
    // only idempotents in degree 0
    bool deg0 = count.count(0) == 0 && (m.includes_idempotents || n_vertices == 0);
    p.connected = deg0 && (neg || pos);
    bool gap = (neg && count.count(-1) == 0) || (pos && count.count(1) == 0);
    p.simply_connected = p.connected && gap;
    // generator lists are finite, so every slot is finite
    p.locally_finite = true;
    return p;
}

int cz_from_degree(int deg) { return -deg; }
int degree_from_cz(int cz) { return -cz; }
int leg_from_degree(int deg) { return -deg - 1; }
int degree_from_leg(int leg) { return -leg - 1; }

DimFormula parse_dim_formula(const std::string& s) {
    if (s == "fi") return DimFormula::Fi;
    if (s == "sy") return DimFormula::Sy;
    if (s == "co") return DimFormula::Co;
    if (s == "co-bar" || s == "cobar") return DimFormula::CoBar;
    throw ground_error("unknown formula id: " + s);
}

int formal_dimension(const DimQuery& q) {
    const int n = q.n;
    int r = 0;
    switch (q.formula) {
        case DimFormula::Fi:
            r = n - 3;
            for (int a : q.a) r -= a - (n - 2);
            return r;
        case DimFormula::Sy:
            r = n - 3;
            for (auto& p : q.sy) r += p.sign < 0 ? p.degree + 1 : -(p.degree - (n - 2));
            return r;
        case DimFormula::Co:
            r = 1;
            for (int c : q.a) r -= c - (n - 2);
            for (int c : q.b) r += c + 1;
            return r;
        case DimFormula::CoBar:
            r = 1;
            for (int c : q.a) r -= c - (n - 2);
            for (int x : q.b) r -= x - (n - 2);
            return r;
    }
    throw ground_error("unknown formula");
}

}  // namespace kk
