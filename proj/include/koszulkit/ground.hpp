#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk {

class ground_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GroundRing {
    std::vector<std::string> vertices;
    std::vector<char> decoration;  // '+' or '-'

    int index(const std::string& v) const;  // -1 if absent
    int size() const { return (int)vertices.size(); }
};

struct GenSymbol {
    std::string name;
    int src = 0, dst = 0;  // vertex indices
    int degree = 0;
    std::optional<int> weight;

    bool operator==(const GenSymbol&) const = default;
};

struct GradedModule {
    std::vector<GenSymbol> generators;
    bool includes_idempotents = true;

    int find(const std::string& name) const;
};

struct GenSpec {
    std::string name, src, dst;
    int degree = 0;
    std::optional<int> weight;
};

std::pair<GroundRing, GradedModule> build_ground(const std::vector<std::string>& vertices,
                                                 const std::vector<char>& decorations,
                                                 const std::vector<GenSpec>& generators);

enum class Side { Left, Right };

// c -> c^v: degree negated, endpoints transposed
GradedModule dual_module(const GradedModule& m, Side side, const std::string& suffix = "v");

struct ModulePredicates {
    bool connected = false, simply_connected = false, locally_finite = false;
};

// degree-0 part counts idempotents (one per vertex) when includes_idempotents
ModulePredicates module_predicates(const GradedModule& m, int n_vertices);

// grading conversions: |c| = -CZ(c), |c|_Leg = -|c| - 1
int cz_from_degree(int deg);
int degree_from_cz(int cz);
int leg_from_degree(int deg);
int degree_from_leg(int leg);

struct Puncture {
    int degree;
    int sign = -1;  // +1 positive, -1 negative (only used by the sy formula)
};

enum class DimFormula { Fi, Sy, Co, CoBar };
DimFormula parse_dim_formula(const std::string& s);

struct DimQuery {
    DimFormula formula;
    int n = 3;
    std::vector<int> a;            // fi: |a_j|; co: |c_r|; co-bar: |c_r|
    std::vector<Puncture> sy;      // sy: signed punctures
    std::vector<int> b;            // co: |c_{0;s}|; co-bar: |x_{0;s}|
};

int formal_dimension(const DimQuery& q);

}  // namespace kk
