#include "ellipt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ellipt {

const char* to_string(SampleSpec::Dist d) {
    switch (d) {
        case SampleSpec::Dist::BallUniform: return "ball-uniform";
        case SampleSpec::Dist::CubeUniform: return "cube-uniform";
        case SampleSpec::Dist::Gaussian: return "gaussian";
    }
    return "unknown";
}

const char* to_string(SampleSpec::Obj o) {
    return o == SampleSpec::Obj::Points ? "points" : "ellipses";
}

SampleSpec::Dist dist_from_string(const std::string& s) {
    if (s == "ball-uniform" || s == "ball") return SampleSpec::Dist::BallUniform;
    if (s == "cube-uniform" || s == "cube") return SampleSpec::Dist::CubeUniform;
    if (s == "gaussian") return SampleSpec::Dist::Gaussian;
    throw std::invalid_argument("unknown distribution '" + s + "'");
}

namespace {

Vec draw(SampleSpec::Dist dist, int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec x(d);
    switch (dist) {
        case SampleSpec::Dist::Gaussian:
            for (int i = 0; i < d; ++i) x[i] = gauss(rng);
            return x;
        case SampleSpec::Dist::CubeUniform:
            for (int i = 0; i < d; ++i) x[i] = unif(rng);
            return x;
        case SampleSpec::Dist::BallUniform: {
            do {
                for (int i = 0; i < d; ++i) x[i] = gauss(rng);
            } while (x.norm() < 1e-12);
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            const double r = std::pow(u01(rng), 1.0 / d);
            return Vec(r * x / x.norm());
        }
    }
    throw std::logic_error("draw: unreachable");
}

}  // namespace

std::vector<Vec> sample_points(const SampleSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(spec.N));
    for (int i = 0; i < spec.N; ++i) out.push_back(draw(spec.dist, spec.d, rng));
    return out;
}

std::vector<Ellipse> sample_ellipses(const SampleSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::vector<Ellipse> out;
    out.reserve(static_cast<size_t>(spec.N));
    for (int i = 0; i < spec.N; ++i) {
        Vec a = draw(spec.dist, spec.d, rng);
        Vec b = draw(spec.dist, spec.d, rng);
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

std::vector<DatasetInstance> gen_dataset_a(int count, int d_min, int d_max, int n_min,
                                           int n_max, std::uint64_t seed) {
    std::vector<DatasetInstance> out;
    for (int i = 0; i < count; ++i) {
        SampleSpec spec;
        spec.dist = SampleSpec::Dist::Gaussian;
        spec.d = d_min + (d_max > d_min ? i % (d_max - d_min + 1) : 0);
        spec.N = n_min + (n_max > n_min ? (i / 3) % (n_max - n_min + 1) : 0);
        spec.seed = seed + static_cast<std::uint64_t>(i) * 1000003ULL;
        std::vector<Ellipse> es = sample_ellipses(spec);
        SampleSpec qspec = spec;
        qspec.N = 1;
        qspec.seed = spec.seed + 7919;
        Ellipse e0 = sample_ellipses(qspec).front();
        out.push_back({"A" + std::to_string(i), std::move(e0), EllipticPolytope(std::move(es))});
    }
    return out;
}

std::vector<DatasetInstance> gen_dataset_b(int families, int d, std::uint64_t seed,
                                           int per_polytope) {
    std::vector<DatasetInstance> out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int produced_families = 0;
    for (int attempt = 0; attempt < 50 * families && produced_families < families; ++attempt) {
        MatrixFamily fam;
        for (int j = 0; j < 2; ++j) {
            Mat A(d, d);
            for (int r = 0; r < d; ++r) {
                for (int c = 0; c < d; ++c) A(r, c) = gauss(rng);
            }
            fam.matrices.push_back(A);
        }
        SmpCandidate cand = find_smp_candidate(fam, 4);
        if (cand.lambda <= 0.0 || !cand.nonreal || !cand.simple) continue;

        int harvested = 0;
        const int family_id = produced_families;
        try {
            jsr_invariant_polytope(fam, 4, 1e-6, 12,
                                   [&](const Ellipse& img, const EllipticPolytope& p) {
                                       if (harvested >= per_polytope || img.is_zero(1e-14)) return;
                                       out.push_back({"B" + std::to_string(family_id) + "-" +
                                                          std::to_string(harvested),
                                                      img, p});
                                       ++harvested;
                                   });
        } catch (const std::exception&) {
            continue;  // harvest failure: skip the family
        }
        if (harvested > 0) ++produced_families;
    }
    return out;
}

double vertex_fraction(const SampleSpec& spec, Method method, double q) {
    if (spec.N < 1) throw std::invalid_argument("vertex_fraction: N >= 1 required");
    if (spec.obj == SampleSpec::Obj::Ellipses) {
        EllipticPolytope p(sample_ellipses(spec));
        if (p.count() == 1) return 1.0;
        return static_cast<double>(reduce(p, method, q).count()) / spec.N;
    }
    // points: p_i is redundant iff it is a convex combination of the others
    const std::vector<Vec> pts = sample_points(spec);
    const int N = spec.N, d = spec.d;
    if (N == 1) return 1.0;
    int vertices = 0;
    for (int i = 0; i < N; ++i) {
        LinearProgram lp;
        lp.c = Vec::Zero(N - 1);
        lp.A_eq = Mat::Ones(d + 1, N - 1);
        lp.b_eq = Vec::Ones(d + 1);
        int col = 0;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            lp.A_eq.block(0, col, d, 1) = pts[static_cast<size_t>(j)];
            ++col;
        }
        lp.b_eq.head(d) = pts[static_cast<size_t>(i)];
        lp.lower = Vec::Zero(N - 1);
        lp.upper = Vec::Constant(N - 1, kInf);
        SolveReport rep = solve_lp(lp, 1e-9);
        if (rep.status == SolveStatus::Infeasible) {
            ++vertices;  // not representable by the others
        } else if (rep.status != SolveStatus::Optimal) {
            throw std::runtime_error("vertex_fraction: membership LP failed");
        }
    }
    return static_cast<double>(vertices) / N;
}

double FactorHistogram::median() const {
    if (factors.empty()) return 0.0;
    std::vector<double> v = factors;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

FactorHistogram factor_density(const std::vector<DatasetInstance>& data, int bins,
                               bool apply_closure) {
    FactorHistogram out;
    out.bins.assign(static_cast<size_t>(bins), 0);
    for (const DatasetInstance& inst : data) {
        double t0 = 0.0, truth = 0.0;
        try {
            t0 = cpm_value(inst.e0, inst.p, apply_closure).t0_max;
            const int level = level_for_factor(std::sqrt(0.9999));
            SimplexBasis basis;
            NormOracle oracle = [&](const Vec& w) {
                return pe_norm_lp_full(w, inst.p, level, 1e-8, &basis).bracket;
            };
            EllipseNormBracket nb = ellipse_norm_bracket(inst.e0, inst.p, 0.9999, 400, oracle);
            if (nb.outside_span || !(nb.hi > 0.0) || !std::isfinite(nb.hi)) {
                ++out.excluded;
                continue;
            }
            truth = 0.5 * (nb.lo + nb.hi);
        } catch (const std::exception&) {
            ++out.excluded;
            continue;
        }
        double factor = std::clamp(t0 * truth, 0.0, 1.0);
        out.factors.push_back(factor);
        int idx = std::min(bins - 1, static_cast<int>(factor * bins));
        out.bins[static_cast<size_t>(idx)]++;
    }
    return out;
}

std::string RunRecord::csv_header() {
    return "run_id,dist,d,N,seed,object,method,q,time_ms,verdict,value,n_vertices";
}

std::string RunRecord::csv_row() const {
    std::ostringstream os;
    os << run_id << ',' << dist << ',' << d << ',' << N << ',' << seed << ',' << object << ','
       << method << ',' << q << ',' << time_ms << ',' << verdict << ',' << value << ','
       << n_vertices;
    return os.str();
}

}  // namespace ellipt
