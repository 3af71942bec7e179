#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "renormlab/extension.hpp"

namespace renormlab {

class SymbolError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SymbolSequence {
    std::vector<int> symbols;
    int alphabet_size = 3;

    SymbolSequence() = default;
    SymbolSequence(std::vector<int> symbols, int alphabet_size = 3);

    std::size_t size() const { return symbols.size(); }
    /// 1-based, as in alpha_1 alpha_2 ...
    int at(std::size_t i) const { return symbols.at(i - 1); }
    std::string str() const;

    bool operator==(const SymbolSequence&) const = default;
};

/// Drops the first symbol; throws SymbolError on a sequence of length 1.
SymbolSequence shift(const SymbolSequence& alpha);

SymbolSequence random_sequence(std::size_t length, int alphabet_size, std::mt19937_64& rng);

/// The gap fillers phi_i on the left and psi_i = mirror(phi_i) on the right,
/// together with the scaling maps they are iterated under.
struct ExtensionTriples {
    std::vector<GapPolicy> policies;
    std::vector<SeedPair> phi;
    std::vector<SeedPair> psi;
    PlaneAffineMap S_left;
    PlaneAffineMap S_right;
    Interval base_left;
    Interval base_right;

    int size() const { return static_cast<int>(policies.size()); }
};

/// Amplitudes 0, +h, -h, +2h, -2h, ... for n symbols.
std::vector<GapPolicy> default_policies(int n, double h = 0.05);

ExtensionTriples make_triples(const std::vector<GapPolicy>& policies, double c_left, double c_right, int fs_depth = 4);
ExtensionTriples make_triples(int n, double h = 0.05);

/// min over i < j of the sup distance between phi_i and phi_j on the gaps
double triple_separation(const ExtensionTriples& t, int samples = 200);

/// sup distance between phi_i and phi_j on the gaps
double seed_pair_distance(const ExtensionTriples& t, int i, int j, int samples = 200);

/// max |psi_i(x) - (1 - phi_i(1 - x))| over the pieces of every seed
double triple_mirror_error(const ExtensionTriples& t, int samples = 50);

struct ShiftOptions {
    /// total number of S-generations; symbols beyond |alpha| are taken as 0
    int graph_depth = 12;
};

/// b_alpha: generation k (0-based) on each side comes from phi/psi of
/// alpha_{k+1} for k < depth and from symbol 0 afterwards.
JoinedMap build_b_alpha(const SymbolSequence& alpha, const ExtensionTriples& triples, int depth,
                        const ShiftOptions& opts = {});

/// One renormalization step done on the graph: every generation k >= 1 is
/// pulled back by S^{-1} and generation 0 is dropped.
JoinedMap renormalize_extended(const JoinedMap& b);

/// Max over matched segments of domain and coefficient differences; infinite
/// if the segment structure differs.
double segment_distance(const JoinedMap& a, const JoinedMap& b);

/// sup over a grid of each base of |h^{-1} b^3 h - c|.
double conjugacy_error(const JoinedMap& b, const JoinedMap& c, int grid);

/// Sup distance between b_{a1} and b_{a2} on a grid refined box by box, so
/// that differences deep in the tower are seen.
double injectivity_probe(const SymbolSequence& a1, const SymbolSequence& a2, const ExtensionTriples& triples,
                         int depth, int samples_per_box = 200, const ShiftOptions& opts = {});

/// Sup of |a - b| over the same box-refined grid.
double multiscale_distance(const JoinedMap& a, const JoinedMap& b, int samples_per_box = 200);

struct ConjugacyReport {
    SymbolSequence alpha;
    int depth = 0;
    double sup_error = 0.0;      // pointwise, triple composition
    double segment_error = 0.0;  // graph pulled back by S^{-1}
    double tolerance = 1e-9;
    bool pass = false;
};

ConjugacyReport verify_conjugacy(const SymbolSequence& alpha, const ExtensionTriples& triples, int grid = 1000,
                                 double tol = 1e-9, const ShiftOptions& opts = {});

/// Independent cases run concurrently; results come back in input order.
std::vector<ConjugacyReport> verify_conjugacy_batch(const std::vector<SymbolSequence>& alphas,
                                                    const ExtensionTriples& triples, int grid = 1000,
                                                    double tol = 1e-9, const ShiftOptions& opts = {});

}  // namespace renormlab
