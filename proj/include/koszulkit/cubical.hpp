#pragma once

#include "koszulkit/ainfty.hpp"

namespace kk {

// Formal cubical chains. A basic cube sigma : I^n -> X is a free symbol; everything
// else is sigma composed with a cubical operator I^k -> I^n that sends each target
// coordinate to a constant 0/1 or to an input coordinate.
struct CubeOp {
    static constexpr int Zero = -1, One = -2;
    int k = 0;             // input dimension
    std::vector<int> map;  // per target coordinate: Zero, One, or an input index 0..k-1
    auto operator<=>(const CubeOp&) const = default;
};

struct CubePiece {
    std::string sym;
    CubeOp op;
    auto operator<=>(const CubePiece&) const = default;
};

// a cube in a product of spaces, all factors driven by the same input cube I^k;
// a factor holding several pieces is their Pontryagin product
struct Cube {
    int k = 0;
    std::vector<std::vector<CubePiece>> factors;
    auto operator<=>(const Cube&) const = default;
};

using CubeTensor = std::vector<Cube>;  // tensor product of cubes, separate inputs

class CubeChain {
  public:
    explicit CubeChain(Field f = Field::Q()) : f_(f) {}
    const Field& field() const { return f_; }
    const std::map<CubeTensor, Scalar>& terms() const { return t_; }
    void add(const CubeTensor& t, const Scalar& c);
    void add(const CubeChain& o, const Scalar& c);
    bool is_zero() const { return t_.empty(); }
    bool operator==(const CubeChain& o) const { return t_ == o.t_; }
    CubeChain operator-(const CubeChain& o) const;

  private:
    Field f_;
    std::map<CubeTensor, Scalar> t_;
};

// sigma : I^n -> X as a one-factor cube
Cube basic_cube(const std::string& sym, int n);
// the product cube (sigma_1, ..., sigma_r) : I^n -> X_1 x ... x X_r
Cube product_cube(const std::vector<std::string>& syms, int n);
CubeChain chain_of(const Cube& c, Field f = Field::Q());
CubeChain chain_of(const CubeTensor& t, Field f = Field::Q());

Cube face(const Cube& c, int i, int eps);  // coordinate i (0-based) frozen at eps
Cube degeneracy(const Cube& c, int i);     // new unused input coordinate at position i
bool is_degenerate(const Cube& c);

// boundary sum_i (-1)^i (d_i^0 - d_i^1), i = 1..n; on tensors with the Koszul sign;
// degenerate cubes are dropped (normalised chains)
CubeChain cube_boundary(const CubeChain& x);
// a x b on single-cube chains: inputs concatenated, factors concatenated
CubeChain cross(const CubeChain& a, const CubeChain& b);
// Pontryagin product merging factor j and j + 1 of the cube in tensor slot s
CubeChain pontryagin(const CubeChain& x, size_t slot, size_t j);
// Serre diagonal on tensor slot s: factors [0, split) go left with 0-faces, the rest right with 1-faces
CubeChain serre_diagonal(const CubeChain& x, size_t slot, size_t split);
// a x b inside one tensor slot pair: slots s and s + 1 are crossed into one cube
CubeChain cross_slots(const CubeChain& x, size_t slot);

std::string cube_str(const Cube& c);
std::string chain_str(const CubeChain& x);

struct CubeReport {
    std::string name;
    size_t cases = 0;
    size_t terms = 0;
    bool ok = true;
    std::vector<Witness> witnesses;
};

// the symbolic identities, on formal cubes of dimension <= max_dim
CubeReport check_boundary_squared(int max_dim);
CubeReport check_cross_leibniz(int max_dim);
CubeReport check_serre_chain_map(int max_dim);
CubeReport check_serre_associative(int max_dim);
CubeReport check_serre_product(int max_dim);
CubeReport check_degenerate_subcomplex(int max_dim);

}  // namespace kk
