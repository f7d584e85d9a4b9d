#pragma once

#include "koszulkit/ainfty.hpp"

#include <functional>

namespace kk {

// basis elements of windowed complexes are tensors of words; a single word for
// free algebras and bar words, two or three for twisted tensor products
using Tensor = std::vector<Word>;
using TensorElem = std::map<Tensor, Scalar>;

void tadd(TensorElem& x, const Tensor& t, const Scalar& c);

// a graded vector space with a degree +1 map, described lazily
struct ComplexSource {
    Field f;
    std::string provenance;
    // basis of the given degree with size <= max_len, in deterministic order
    std::function<std::vector<Tensor>(int degree, size_t max_len)> basis;
    std::function<TensorElem(const Tensor&)> d;
    std::function<std::string(const Tensor&)> label;
    // largest size a basis element of this degree can have; nullopt if unbounded
    std::function<std::optional<size_t>(int degree)> size_bound;
};

struct ChainWindow {
    Field f;
    int dmin = 0, dmax = 0;
    size_t max_len = 0;
    std::string provenance;
    // stored for dmin-1 .. dmax+1
    std::map<int, std::vector<Tensor>> basis;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::map<Tensor, int>> index;
    std::map<int, SparseMatrix> d;       // d[k] : C^k -> C^{k+1}, k = dmin-1 .. dmax
    std::map<int, bool> certified;       // dmin .. dmax
    std::map<int, size_t> dropped;       // terms of d leaving the truncation, per source degree
    std::map<int, std::vector<bool>> lossy;  // basis elements whose d lost terms

    int dim(int k) const;
    const SparseMatrix& dmat(int k) const;
};

// without max_len a bounded source derives the length from the degree window
ChainWindow assemble_window(const ComplexSource& s, int dmin, int dmax, std::optional<size_t> max_len);
// a window from explicit matrices (d[k] : C^k -> C^{k+1}); every degree certified
ChainWindow window_from_matrices(Field f, int dmin, int dmax, const std::map<int, int>& dims,
                                 const std::map<int, SparseMatrix>& d);

struct SquareCheck {
    bool ok = true;
    bool clipped = false;  // every failure is explained by terms lost to the truncation
    std::vector<Witness> witnesses;
};
SquareCheck check_d_squared(const ChainWindow& w);

// homology ranks on [dmin, dmax]; throws algebra_error if d^2 != 0 in the window
// (the message says whether the failure is a truncation artifact)
std::map<int, int> betti(const ChainWindow& w);
// Euler characteristic of dimensions and of betti numbers over [dmin, dmax]
long euler_dims(const ChainWindow& w);

struct ChainMap {
    std::map<int, SparseMatrix> f;  // f[k] : C^k -> D^k, k = dmin-1 .. dmax+1
};
ChainMap assemble_map(const ChainWindow& src, const ChainWindow& tgt, const std::function<TensorElem(const Tensor&)>& f);
ChainMap compose(const ChainMap& g, const ChainMap& f);

struct QuasiIso {
    bool chain_map = true;
    bool iso = false;
    std::vector<Witness> witnesses;
    struct Row {
        int src_betti, tgt_betti, induced_rank;
    };
    std::map<int, Row> ranks;
};
QuasiIso quasi_iso(const ChainWindow& src, const ChainWindow& tgt, const ChainMap& f);

// words of the given degree whose total weight (GenSymbol::weight, default 1) is <= max_weight
std::vector<Word> enumerate_weighted(const Quiver& q, int degree, size_t max_weight, int shift = 0,
                                     bool include_idempotents = true);
size_t word_weight(const Quiver& q, const Word& w);
// bound on the weight of words of the given degree when all shifted letter degrees share a strict sign
std::optional<size_t> weight_bound(const Quiver& q, int degree, int shift = 0);

// complexes attached to the basic structures
ComplexSource dga_source(const FreeDGA& a);
ComplexSource coalg_source(const AInfCoalg& c);  // k + C with differential Delta_1
ComplexSource alg_source(const AInfAlg& a);      // k + A with differential m_1

}  // namespace kk
