#include "renormlab/shift.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace renormlab {

SymbolSequence::SymbolSequence(std::vector<int> s, int n) : symbols(std::move(s)), alphabet_size(n)
{
    if (alphabet_size < 1)
        throw SymbolError("alphabet size must be positive");
    if (symbols.empty())
        throw SymbolError("symbol sequence must be nonempty");
    for (int a : symbols)
        if (a < 0 || a >= alphabet_size)
            throw SymbolError("symbol " + std::to_string(a) + " outside alphabet of size " +
                              std::to_string(alphabet_size));
}

std::string SymbolSequence::str() const
{
    std::string out;
    for (int a : symbols)
        out += std::to_string(a);
    return out;
}

SymbolSequence shift(const SymbolSequence& alpha)
{
    if (alpha.size() < 2)
        throw SymbolError("cannot shift a sequence of length " + std::to_string(alpha.size()));
    return {{alpha.symbols.begin() + 1, alpha.symbols.end()}, alpha.alphabet_size};
}

SymbolSequence random_sequence(std::size_t length, int alphabet_size, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> pick(0, alphabet_size - 1);
    std::vector<int> s(length);
    for (int& a : s)
        a = pick(rng);
    return {std::move(s), alphabet_size};
}

std::vector<GapPolicy> default_policies(int n, double h)
{
    if (n < 1)
        throw SymbolError("need at least one policy");
    std::vector<GapPolicy> out;
    for (int i = 0; i < n; ++i) {
        const int k = (i + 1) / 2;
        out.push_back({i % 2 == 1 ? k * h : -k * h});
    }
    return out;
}

ExtensionTriples make_triples(const std::vector<GapPolicy>& policies, double c_left, double c_right, int fs_depth)
{
    const PiecewiseAffineMap f_left = build_fs(Side::Left, c_left, std::max(fs_depth, 2));
    const PiecewiseAffineMap f_right = build_fs(Side::Right, c_right, std::max(fs_depth, 2));
    ExtensionTriples t;
    t.policies = policies;
    t.S_left = scaling_map(f_left.data());
    t.S_right = scaling_map(f_right.data());
    t.base_left = f_left.data().base();
    t.base_right = f_right.data().base();
    for (const GapPolicy& p : policies) {
        SeedPair s = seed_segments(Side::Left, f_left, p);
        t.psi.push_back({mirror(s.first), mirror(s.second)});
        t.phi.push_back(std::move(s));
    }
    return t;
}

ExtensionTriples make_triples(int n, double h)
{
    return make_triples(default_policies(n, h), unperturbed_fixed_point(Side::Left).c_star,
                        unperturbed_fixed_point(Side::Right).c_star);
}

namespace {

double segment_value(const GraphSegment& g, double x)
{
    const CubicPiece* p = g.find(x);
    return p ? p->value(x) : g.pieces.back().value(x);
}

double seed_distance(const SeedPair& a, const SeedPair& b, int samples)
{
    double d = 0.0;
    for (auto [ga, gb] : {std::pair{&a.first, &b.first}, std::pair{&a.second, &b.second}}) {
        for (int i = 0; i <= samples; ++i) {
            const double x = ga->domain.lo + ga->domain.length() * i / samples;
            d = std::max(d, std::abs(segment_value(*ga, x) - segment_value(*gb, x)));
        }
    }
    return d;
}

}  // namespace

double seed_pair_distance(const ExtensionTriples& t, int i, int j, int samples)
{
    return seed_distance(t.phi.at(static_cast<std::size_t>(i)), t.phi.at(static_cast<std::size_t>(j)), samples);
}

double triple_separation(const ExtensionTriples& t, int samples)
{
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < t.size(); ++i)
        for (int j = i + 1; j < t.size(); ++j)
            m = std::min(m, seed_distance(t.phi[i], t.phi[j], samples));
    return m;
}

double triple_mirror_error(const ExtensionTriples& t, int samples)
{
    double err = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        for (auto [phi, psi] :
             {std::pair{&t.phi[i].first, &t.psi[i].first}, std::pair{&t.phi[i].second, &t.psi[i].second}}) {
            for (const CubicPiece& p : phi->pieces) {
                for (int k = 0; k <= samples; ++k) {
                    const double x = p.domain.lo + p.domain.length() * k / samples;
                    err = std::max(err, std::abs(segment_value(*psi, 1.0 - x) - (1.0 - p.value(x))));
                }
            }
        }
    }
    return err;
}

JoinedMap build_b_alpha(const SymbolSequence& alpha, const ExtensionTriples& triples, int depth,
                        const ShiftOptions& opts)
{
    if (alpha.alphabet_size != triples.size())
        throw SymbolError("alphabet of size " + std::to_string(alpha.alphabet_size) + " but " +
                          std::to_string(triples.size()) + " extension pairs");
    if (depth < 0 || static_cast<std::size_t>(depth) > alpha.size())
        throw SymbolError("depth " + std::to_string(depth) + " exceeds sequence length " +
                          std::to_string(alpha.size()));
    if (opts.graph_depth < std::max(depth, 1))
        throw std::invalid_argument("graph depth below symbol depth");
    auto symbol = [&](int k) { return k < depth ? alpha.symbols[static_cast<std::size_t>(k)] : 0; };
    ExtensionGraph left = iterate_extension([&](int k) { return triples.phi[symbol(k)]; }, triples.S_left,
                                            opts.graph_depth, Side::Left, triples.base_left);
    ExtensionGraph right = iterate_extension([&](int k) { return triples.psi[symbol(k)]; }, triples.S_right,
                                             opts.graph_depth, Side::Right, triples.base_right);
    return join_bimodal(std::move(left), std::move(right));
}

namespace {

GraphSegment pull_back(const GraphSegment& g, const PlaneAffineMap& S)
{
    GraphSegment out = transform(g, S.inverse());
    out.n = g.n - 2;
    out.generation = g.generation - 1;
    return out;
}

ExtensionGraph renormalize_side(const ExtensionGraph& g)
{
    if (g.depth() < 2)
        throw DepthExhausted("renormalizing an extension needs depth >= 2");
    ExtensionGraph out;
    out.side = g.side;
    out.S = g.S;
    out.base = g.base;
    out.c_star = g.c_star;
    out.critical_value = g.critical_value;
    for (const GraphSegment& s : g.segments)
        if (s.generation >= 1)
            out.segments.push_back(pull_back(s, g.S));
    std::sort(out.segments.begin(), out.segments.end(),
              [](const GraphSegment& a, const GraphSegment& b) { return a.domain.lo < b.domain.lo; });
    out.lipschitz_ledger.assign(g.lipschitz_ledger.begin() + 1, g.lipschitz_ledger.end());
    out.slope_ledger.assign(g.slope_ledger.begin() + 1, g.slope_ledger.end());
    for (std::size_t k = 0; k + 1 < g.boxes.size(); ++k)
        out.boxes.push_back({static_cast<int>(k), g.boxes[k].x, g.boxes[k].y});
    const AffineMap1D pull = g.S.x_part.inverse();
    out.hole = pull.image(g.hole);
    for (Junction j : g.junctions) {
        if (j.generation < 1)
            continue;
        // slopes scale by s2/s1 under the pull-back, in absolute value
        const double f = g.S.x_part.slope / g.S.y_part.slope;
        j.x = pull(j.x);
        j.left_n -= 2;
        j.right_n -= 2;
        j.generation -= 1;
        j.slope_left *= f;
        j.slope_right *= f;
        if (g.S.x_part.slope < 0.0) {
            std::swap(j.left_n, j.right_n);
            std::swap(j.slope_left, j.slope_right);
        }
        j.mismatch = std::abs(j.slope_left - j.slope_right);
        out.junctions.push_back(j);
    }
    std::sort(out.junctions.begin(), out.junctions.end(),
              [](const Junction& a, const Junction& b) { return a.x < b.x; });
    return out;
}

double graph_distance(const ExtensionGraph& a, const ExtensionGraph& b)
{
    if (a.segments.size() != b.segments.size())
        return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        const GraphSegment& p = a.segments[i];
        const GraphSegment& q = b.segments[i];
        if (p.n != q.n || p.pieces.size() != q.pieces.size())
            return std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < p.pieces.size(); ++k) {
            const CubicPiece& u = p.pieces[k];
            const CubicPiece& v = q.pieces[k];
            d = std::max({d, std::abs(u.domain.lo - v.domain.lo), std::abs(u.domain.hi - v.domain.hi)});
            // coefficients weighted by the matching power of the piece length
            double scale = 1.0;
            for (std::size_t c = 0; c < 4; ++c) {
                d = std::max(d, std::abs(u.c[c] - v.c[c]) * scale);
                scale *= u.span;
            }
        }
    }
    return d;
}

}  // namespace

JoinedMap renormalize_extended(const JoinedMap& b)
{
    return join_bimodal(renormalize_side(b.left), renormalize_side(b.right));
}

double segment_distance(const JoinedMap& a, const JoinedMap& b)
{
    return std::max(graph_distance(a.left, b.left), graph_distance(a.right, b.right));
}

double conjugacy_error(const JoinedMap& b, const JoinedMap& c, int grid)
{
    double err = 0.0;
    for (const ExtensionGraph* g : {&c.left, &c.right}) {
        for (int i = 0; i <= grid; ++i) {
            const double x = g->base.lo + g->base.length() * i / grid;
            err = std::max(err, std::abs(renormalized_value(b, g->side, x) - c(x)));
        }
    }
    return err;
}

double multiscale_distance(const JoinedMap& a, const JoinedMap& b, int samples_per_box)
{
    double d = 0.0;
    for (int i = 0; i <= samples_per_box; ++i) {
        const double x = a.left.base.hi + (a.right.base.lo - a.left.base.hi) * i / samples_per_box;
        d = std::max(d, std::abs(a(x) - b(x)));
    }
    for (const ExtensionGraph* g : {&a.left, &a.right}) {
        for (const Box& box : g->boxes) {
            for (int i = 0; i <= samples_per_box; ++i) {
                const double x = box.x.lo + box.x.length() * i / samples_per_box;
                d = std::max(d, std::abs(a(x) - b(x)));
            }
        }
    }
    return d;
}

double injectivity_probe(const SymbolSequence& a1, const SymbolSequence& a2, const ExtensionTriples& triples,
                         int depth, int samples_per_box, const ShiftOptions& opts)
{
    return multiscale_distance(build_b_alpha(a1, triples, depth, opts), build_b_alpha(a2, triples, depth, opts),
                               samples_per_box);
}

ConjugacyReport verify_conjugacy(const SymbolSequence& alpha, const ExtensionTriples& triples, int grid,
                                 double tol, const ShiftOptions& opts)
{
    ConjugacyReport rep;
    rep.alpha = alpha;
    rep.depth = static_cast<int>(alpha.size());
    rep.tolerance = tol;
    const JoinedMap b = build_b_alpha(alpha, triples, rep.depth, opts);
    ShiftOptions inner = opts;
    inner.graph_depth = opts.graph_depth - 1;
    const JoinedMap c = build_b_alpha(shift(alpha), triples, rep.depth - 1, inner);
    rep.sup_error = conjugacy_error(b, c, grid);
    rep.segment_error = segment_distance(renormalize_extended(b), c);
    rep.pass = rep.sup_error < tol && rep.segment_error < tol;
    return rep;
}

std::vector<ConjugacyReport> verify_conjugacy_batch(const std::vector<SymbolSequence>& alphas,
                                                    const ExtensionTriples& triples, int grid, double tol,
                                                    const ShiftOptions& opts)
{
    std::vector<std::future<ConjugacyReport>> jobs;
    for (const SymbolSequence& a : alphas)
        jobs.push_back(std::async(std::launch::async, [&triples, a, grid, tol, opts] {
            return verify_conjugacy(a, triples, grid, tol, opts);
        }));
    std::vector<ConjugacyReport> out;
    for (auto& j : jobs)
        out.push_back(j.get());
    return out;
}

}  // namespace renormlab
