#include "altproj/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "altproj/errors.hpp"
#include "altproj/fracpow.hpp"
#include "altproj/geometry.hpp"
#include "altproj/models.hpp"
#include "altproj/spectral.hpp"

namespace altproj {

namespace {

std::mt19937_64 make_rng(Seed seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

Vector gaussian(Index d, std::mt19937_64& rng, bool real)
{
    std::normal_distribution<Real> g;
    Vector v(d);
    for (Index i = 0; i < d; ++i)
        v(i) = real ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
    return v / v.norm();
}

std::string fmt(Real v)
{
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

struct Prepared {
    std::vector<Subspace> subspaces;
    CyclicProduct cp;
};

Prepared prepare(const InstanceSpec& spec)
{
    auto fam = materialize(spec).families.front();
    CyclicProduct cp = build_cyclic(fam);
    return {std::move(fam), std::move(cp)};
}

// Range basis of A by SVD, independent of the library's subspace routines.
Matrix range_basis(const Matrix& a, Real tol = 1e-9)
{
    if (a.cols() == 0)
        return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Index r = 0;
    while (r < s.size() && s(r) > tol * std::max<Real>(1.0, s(0)))
        ++r;
    return svd.matrixU().leftCols(r);
}

// Bases of M_k ∩ M^⊥ from projector arithmetic: M is the kernel of Σ(I - P_k).
std::vector<Matrix> oracle_complements(const std::vector<Subspace>& fam)
{
    const Index d = fam.front().dim();
    const Matrix id = Matrix::Identity(d, d);
    Matrix s = Matrix::Zero(d, d);
    std::vector<Matrix> proj;
    for (const auto& m : fam) {
        proj.push_back(m.basis() * m.basis().adjoint());
        s += id - proj.back();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    Matrix pm = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i)
        if (es.eigenvalues()(i) < 1e-9)
            pm += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    std::vector<Matrix> out;
    for (const auto& p : proj)
        out.push_back(range_basis((id - pm) * p));
    return out;
}

// Sphere-sampling maximizer of (||Σ B_k u_k||^2 - 1)/(N - 1) over Σ||u_k||^2 = 1.
Real sampled_friedrichs(const std::vector<Matrix>& bases, int samples, bool real,
                        std::mt19937_64& rng)
{
    const int N = static_cast<int>(bases.size());
    Index R = 0;
    for (const auto& b : bases)
        R += b.cols();
    if (R == 0)
        return 0.0;
    const Index d = bases.front().rows();
    Matrix stacked(d, R);
    Index off = 0;
    for (const auto& b : bases) {
        stacked.middleCols(off, b.cols()) = b;
        off += b.cols();
    }
    Real best = -std::numeric_limits<Real>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Vector u = gaussian(R, rng, real);
        best = std::max(best, ((stacked * u).squaredNorm() - 1.0) / (N - 1));
    }
    return std::max(best, 0.0);
}

CriterionResult named(int id, const char* name)
{
    CriterionResult r;
    r.id = id;
    r.name = name;
    return r;
}

using Check = std::function<CriterionResult(const AcceptanceOptions&,
                                            const std::vector<std::pair<std::string, InstanceSpec>>&)>;

CriterionResult crit_two_subspace_law(const AcceptanceOptions&,
                                      const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(1, "two_subspace_law");
    Real worst = 0.0;
    for (Real theta : {kPi / 6, kPi / 4, kPi / 3}) {
        auto [a, b] = two_lines(theta);
        std::vector<Subspace> fam{a, b};
        const CyclicProduct cp = build_cyclic(fam);
        for (int n = 1; n <= 20; ++n)
            worst = std::max(worst, std::abs(operator_error_norm(cp, n) -
                                             std::pow(std::cos(theta), 2 * n - 1)));
    }
    r.passed = worst <= 1e-10;
    r.detail = "max |err - cos^(2n-1)| = " + fmt(worst);
    return r;
}

CriterionResult crit_rate_bounds(const AcceptanceOptions& o,
                                 const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(2, "rate_bounds");
    Real worst_c = -1.0, worst_i = -1.0;
    int failures = 0;
    const auto specs = battery_instances(200, o.seed);
    auto rng = make_rng(o.seed, 2);
    for (const auto& spec : specs) {
        const Prepared p = prepare(spec);
        const Real c = friedrichs_number(p.subspaces, p.cp.M());
        const Real i2 = iota2(p.subspaces, p.cp.M()).value;
        const Vector x = gaussian(p.cp.dim(), rng, false);
        const auto tr = iterate(p.cp, x, 200, {c, i2});
        for (std::size_t n = 0; n < tr.errors.size(); ++n) {
            const Real dc = tr.errors[n] - tr.bound_c[n];
            const Real di = tr.errors[n] - tr.bound_iota2[n];
            worst_c = std::max(worst_c, dc);
            worst_i = std::max(worst_i, di);
            if (dc > 1e-9 || di > 1e-9)
                ++failures;
        }
    }
    r.passed = failures == 0;
    r.detail = "200 instances, max(e_n - bound_c) = " + fmt(worst_c) +
               ", max(e_n - bound_iota2) = " + fmt(worst_i);
    return r;
}

CriterionResult crit_ell2_identity(const AcceptanceOptions& o,
                                   const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(3, "ell2_identity");
    Real worst = 0.0, worst_order = -1.0;
    for (const auto& spec : battery_instances(200, o.seed)) {
        const Prepared p = prepare(spec);
        const Real c = friedrichs_number(p.subspaces, p.cp.M());
        const Real l2 = ell2(c, p.cp.N());
        worst = std::max(worst, std::abs(ell2_direct(p.subspaces, p.cp.M()) - l2));
        worst_order = std::max(worst_order, l2 - iota2(p.subspaces, p.cp.M()).value);
    }
    r.passed = worst <= 1e-8 && worst_order <= 1e-9;
    r.detail = "max |ell2_direct - ell2| = " + fmt(worst) + ", max(ell2 - iota2) = " + fmt(worst_order);
    return r;
}

CriterionResult crit_friedrichs_oracle(const AcceptanceOptions& o,
                                       const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(4, "friedrichs_oracle");
    auto rng = make_rng(o.seed, 4);
    std::uniform_int_distribution<int> pick_n(2, 3), pick_d(3, 6);
    int sampled = 0, n2 = 0;
    Real worst_low = 0.0, worst_high = 0.0, worst_sv = 0.0;
    bool ok = true;
    for (int t = 0; sampled < 20 && t < 1000; ++t) {
        InstanceSpec spec;
        spec.seed = o.seed + 4000 + t;
        spec.dim = pick_d(rng);
        const int N = pick_n(rng);
        std::uniform_int_distribution<Index> pick_r(1, spec.dim - 1);
        for (int k = 0; k < N; ++k)
            spec.ranks.push_back(pick_r(rng));
        const Prepared p = prepare(spec);
        const auto bases = oracle_complements(p.subspaces);
        Index R = 0;
        for (const auto& b : bases)
            R += b.cols();
        if (R == 0 || R > 6)
            continue;
        ++sampled;
        const Real c = friedrichs_number(p.subspaces, p.cp.M());
        const Real cs = sampled_friedrichs(bases, 100000, true, rng);
        worst_low = std::max(worst_low, cs - c);
        worst_high = std::max(worst_high, c - cs);
        if (c < cs - 1e-6 || c > cs + 0.05)
            ok = false;
    }
    for (int t = 0; n2 < 20 && t < 1000; ++t) {
        InstanceSpec spec;
        spec.seed = o.seed + 5000 + t;
        spec.dim = 2 + t % 11;
        std::uniform_int_distribution<Index> pick_r(1, spec.dim - 1);
        const Index r1 = pick_r(rng);
        std::uniform_int_distribution<Index> pick_r2(1, spec.dim - r1);
        spec.ranks = {r1, pick_r2(rng)};
        const Prepared p = prepare(spec);
        if (!p.cp.M().is_zero())
            continue;
        ++n2;
        const Matrix cross = p.subspaces[0].basis().adjoint() * p.subspaces[1].basis();
        const Real sv = Eigen::JacobiSVD<Matrix>(cross).singularValues()(0);
        worst_sv = std::max(worst_sv, std::abs(sv - friedrichs_number(p.subspaces, p.cp.M())));
    }
    r.passed = ok && sampled > 0 && n2 > 0 && worst_sv <= 1e-9;
    r.detail = std::to_string(sampled) + " sampled instances, max(c_sample - c) = " + fmt(worst_low) +
               ", max(c - c_sample) = " + fmt(worst_high) + "; " + std::to_string(n2) +
               " two-subspace instances, max |c - smax| = " + fmt(worst_sv);
    return r;
}

CriterionResult crit_sweep(const AcceptanceOptions& o,
                           const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(5, "sweep_inequality");
    auto rng = make_rng(o.seed, 5);
    int pairs = 0, failures = 0;
    Real worst = -std::numeric_limits<Real>::infinity();
    for (const auto& spec : battery_instances(200, o.seed + 1)) {
        const Prepared p = prepare(spec);
        for (int j = 0; j < 50; ++j, ++pairs) {
            const Vector x = gaussian(p.cp.dim(), rng, j % 2 == 0);
            const Real budget = sweep_budget(p.cp, x);
            for (Real v : sweep_diagnostic(p.cp, x)) {
                worst = std::max(worst, v - budget);
                if (v > budget + 1e-10)
                    ++failures;
            }
        }
    }
    r.passed = failures == 0;
    r.detail = std::to_string(pairs) + " pairs, max(entry - budget) = " + fmt(worst);
    return r;
}

bool is_convex(const InstanceSpec& s) { return s.kind == InstanceKind::convex_combination; }

CriterionResult crit_numerical_range(const AcceptanceOptions& o,
                                     const std::vector<std::pair<std::string, InstanceSpec>>& fixtures)
{
    CriterionResult r = named(6, "numerical_range");
    int failures = 0, checked = 0;
    Real worst = std::numeric_limits<Real>::infinity();
    auto check = [&](const ContainmentReport& rep) {
        ++checked;
        worst = std::min(worst, rep.worst_margin);
        if (!rep.passed)
            ++failures;
    };
    for (const auto& spec : battery_instances(100, o.seed)) {
        const Prepared p = prepare(spec);
        check(containment_check(p.cp.T(), friedrichs_number(p.subspaces, p.cp.M()), p.cp.N(), 256,
                                1e-7));
    }
    int convex = 0;
    for (const auto& [name, spec] : fixtures) {
        if (!is_convex(spec))
            continue;
        ++convex;
        const Instance inst = materialize(spec);
        std::vector<CyclicProduct> cps;
        Real theta = 0.0;
        for (const auto& fam : inst.families) {
            cps.push_back(build_cyclic(fam));
            theta = std::max(theta, theta0(friedrichs_number(fam, cps.back().M()), cps.back().N()));
        }
        std::vector<const CyclicProduct*> ptrs;
        for (const auto& cp : cps)
            ptrs.push_back(&cp);
        check(stolz_containment_check(convex_combination(ptrs, inst.weights), theta, 256, 1e-7));
    }
    r.passed = failures == 0 && convex > 0;
    r.detail = std::to_string(checked) + " operators (" + std::to_string(convex) +
               " convex combinations), worst margin = " + fmt(worst);
    return r;
}

CriterionResult crit_ritt(const AcceptanceOptions& o,
                          const std::vector<std::pair<std::string, InstanceSpec>>& fixtures)
{
    CriterionResult r = named(7, "ritt");
    std::vector<Matrix> ops;
    for (const auto& spec : battery_instances(100, o.seed))
        ops.push_back(prepare(spec).cp.T());
    int zero_fixtures = 0;
    bool zero_ok = true;
    Real zero_const = 0.0;
    for (const auto& [name, spec] : fixtures) {
        if (is_convex(spec))
            continue;
        const Instance inst = materialize(spec);
        if (inst.families.front().front().dim() > 64)
            continue;
        const CyclicProduct cp = build_cyclic(inst.families.front());
        if (cp.T().norm() < 1e-12) {
            ++zero_fixtures;
            zero_const = resolvent_diagnostic(cp.T(), default_radii(), 256);
            zero_ok = zero_ok && zero_const >= 1.9 && zero_const <= 2.0;
        }
        ops.push_back(cp.T());
    }
    int monotone_fail = 0, stability_fail = 0, latest_tail = 1;
    Real worst_sup = 0.0, worst_var = 0.0;
    const std::vector<Real> radii{1.0 + std::ldexp(1.0, -9), 1.0 + std::ldexp(1.0, -10)};
    for (const auto& T : ops) {
        const auto prof = ritt_power_diagnostic(T, 500);
        worst_sup = std::max(worst_sup, prof.sup);
        if (!std::isfinite(prof.sup) || !prof.tail_monotone) {
            ++monotone_fail;
            latest_tail = std::max(latest_tail, prof.monotone_from);
        }
        const auto res = resolvent_profile(T, radii, 64);
        const Real var = std::abs(res[1].constant - res[0].constant) / res[0].constant;
        worst_var = std::max(worst_var, var);
        if (var > 0.01)
            ++stability_fail;
    }
    r.passed = monotone_fail == 0 && stability_fail == 0 && zero_fixtures > 0 && zero_ok;
    r.detail = std::to_string(ops.size()) + " operators, max sup n||T^n(I-T)|| = " + fmt(worst_sup) +
               ", profiles rising after argmax = " + std::to_string(monotone_fail) +
               " (latest rise at n = " + std::to_string(latest_tail) + ")" +
               ", max resolvent variation = " + fmt(worst_var) + ", T=0 constant = " + fmt(zero_const);
    return r;
}

CriterionResult crit_unconditional(const AcceptanceOptions& o,
                                   const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(8, "unconditional_sum");
    std::vector<InstanceSpec> specs;
    InstanceSpec lines;
    lines.kind = InstanceKind::two_lines;
    lines.theta = kPi / 3;
    specs.push_back(lines);
    for (const auto& s : battery_instances(20, o.seed + 8))
        specs.push_back(s);
    auto rng = make_rng(o.seed, 8);
    int failures = 0;
    Real worst_dev = 0.0, worst_tel = 0.0;
    int max_k = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const Prepared p = prepare(specs[i]);
        const Vector x = gaussian(p.cp.dim(), rng, false);
        try {
            const auto rep = unconditional_sum_test(p.cp, x, 50, 1e-6, o.seed + i);
            worst_dev = std::max(worst_dev, rep.max_permuted_deviation);
            worst_tel = std::max(worst_tel, rep.telescoping_error);
            max_k = std::max(max_k, rep.K);
            if (!rep.permutations_ok || rep.telescoping_error > 1e-12)
                ++failures;
        } catch (const CapacityError&) {
            ++failures;
        }
    }
    r.passed = failures == 0;
    r.detail = std::to_string(specs.size()) + " instances x 50 permutations, max deviation = " +
               fmt(worst_dev) + ", max telescoping error = " + fmt(worst_tel) +
               ", largest K = " + std::to_string(max_k);
    return r;
}

CriterionResult crit_fractional(const AcceptanceOptions& o,
                                const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(9, "fractional_decay");
    const BlockAlignedModel model = block_aligned(400, AngleRule::inverse);
    const auto fam = model.subspaces();
    const CyclicProduct cp = build_cyclic(fam);
    const auto weights = model.square_summable_weights(2.0);
    bool ok = true;
    std::ostringstream detail;
    for (Real alpha : {0.5, 1.0, 2.0}) {
        const AlphaVector av = make_alpha_vector(cp, alpha, o.seed + 9, weights);
        const auto tr = iterate(cp, av.x, 1000);
        const DecayReport rep = decay_report(tr, alpha, 100, 1000);
        const bool pass = rep.slope <= -alpha + 0.1 && rep.scaled_nonincreasing;
        ok = ok && pass;
        detail << "alpha " << alpha << ": slope " << fmt(rep.slope)
               << (rep.scaled_nonincreasing ? " (n^a e_n decreasing)" : " (n^a e_n not decreasing)");
        if (alpha <= 1.0) {
            const auto ps = partial_sum_characterization(cp, av.x, alpha, 1000000);
            ok = ok && ps.bounded;
            detail << ", partial sums sup " << fmt(ps.sup) << " growth "
                   << fmt(ps.sup - ps.sup_at_last_decade);
        }
        detail << "; ";
    }
    r.passed = ok;
    r.detail = detail.str();
    return r;
}

CriterionResult crit_slow_vector(const AcceptanceOptions&,
                                 const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(10, "slow_vector");
    const BlockAlignedModel model = block_aligned(400, AngleRule::inverse);
    const auto fam = model.subspaces();
    const CyclicProduct cp = build_cyclic(fam);
    auto rn = [](int n) { return 1.0 / std::log(n + 2.0); };
    const auto sv = slow_vector(model, rn, 1000, 0.1);
    const auto tr = iterate(cp, sv.x, 1000);
    Real worst = std::numeric_limits<Real>::infinity();
    for (int n = 0; n <= 1000; ++n)
        worst = std::min(worst, tr.errors[n] - rn(n));
    const Real ratio = sv.x.norm() / rn(0);
    r.passed = worst >= 0.0 && ratio <= 1.1;
    r.detail = std::to_string(sv.blocks_used.size()) + " block(s), min(e_n - r_n) = " + fmt(worst) +
               ", ||x||/r_0 = " + fmt(ratio);
    return r;
}

CriterionResult crit_theta(const AcceptanceOptions&,
                           const std::vector<std::pair<std::string, InstanceSpec>>&)
{
    CriterionResult r = named(11, "theta_recursion");
    const Real t1 = theta_recursion(1);
    const Real t2 = theta_recursion(2);
    bool increasing = true;
    for (int n = 1; n < 10; ++n)
        increasing = increasing && theta_recursion(n + 1) > theta_recursion(n);
    r.passed = t1 == 0.0 && std::abs(t2 - kPi / 6) <= 1e-12 && increasing;
    r.detail = "theta_1 = " + fmt(t1) + ", |theta_2 - pi/6| = " + fmt(std::abs(t2 - kPi / 6)) +
               (increasing ? ", increasing to N = 10" : ", NOT increasing");
    return r;
}

}  // namespace

std::vector<InstanceSpec> battery_instances(int count, Seed seed)
{
    auto rng = make_rng(seed, 1);
    std::uniform_int_distribution<int> pick_d(2, 12), pick_n(2, 4);
    std::vector<InstanceSpec> out;
    for (int i = 0; i < count; ++i) {
        InstanceSpec s;
        s.kind = InstanceKind::random;
        s.seed = seed * 1000003ULL + static_cast<Seed>(i);
        s.dim = pick_d(rng);
        const int N = pick_n(rng);
        std::uniform_int_distribution<Index> pick_r(1, s.dim - 1);
        for (int k = 0; k < N; ++k)
            s.ranks.push_back(pick_r(rng));
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::pair<std::string, InstanceSpec>> builtin_fixtures()
{
    std::vector<std::pair<std::string, InstanceSpec>> out;
    InstanceSpec s;
    s.kind = InstanceKind::two_lines;
    s.theta = kPi / 3;
    out.emplace_back("two_lines_pi3", s);
    s.theta = kPi / 2;
    out.emplace_back("orthogonal_lines", s);

    InstanceSpec b;
    b.kind = InstanceKind::block_aligned;
    b.blocks = 400;
    b.rule = AngleRule::inverse;
    out.emplace_back("block_inverse_400", b);

    InstanceSpec rnd;
    rnd.kind = InstanceKind::random;
    rnd.seed = 7;
    rnd.dim = 8;
    rnd.ranks = {4, 4, 4};
    out.emplace_back("random_d8_n3", rnd);

    InstanceSpec cc;
    cc.kind = InstanceKind::convex_combination;
    cc.seed = 11;
    cc.dim = 6;
    cc.weights = {0.5, 0.5};
    cc.products = {{3, 4}, {2, 3, 4}};
    out.emplace_back("convex_pair", cc);
    cc.seed = 23;
    cc.dim = 10;
    cc.weights = {0.25, 0.25, 0.5};
    cc.products = {{5, 6}, {4, 7, 6}, {8, 3, 5, 7}};
    out.emplace_back("convex_triple", cc);
    return out;
}

std::vector<std::pair<std::string, InstanceSpec>> load_fixtures(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".inst")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, InstanceSpec>> out;
    for (const auto& f : files)
        out.emplace_back(f.stem().string(), parse_instance_file(f.string()));
    return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* progress)
{
    const auto fixtures =
        options.fixture_dir.empty() ? builtin_fixtures() : load_fixtures(options.fixture_dir);
    const std::vector<Check> checks = {
        crit_two_subspace_law, crit_rate_bounds,    crit_ell2_identity, crit_friedrichs_oracle,
        crit_sweep,            crit_numerical_range, crit_ritt,          crit_unconditional,
        crit_fractional,       crit_slow_vector,    crit_theta,
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!options.only.empty() &&
            std::find(options.only.begin(), options.only.end(), id) == options.only.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = checks[i](options, fixtures);
        } catch (const std::exception& e) {
            res.id = id;
            res.name = "criterion_" + std::to_string(id);
            res.passed = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (progress)
            *progress << format_result(res) << std::endl;
        out.push_back(std::move(res));
    }
    return out;
}

std::string format_result(const CriterionResult& r)
{
    char id[8];
    std::snprintf(id, sizeof id, "C%02d", r.id);
    std::ostringstream s;
    s << (r.passed ? "PASS " : "FAIL ") << id << ' ' << r.name << ": " << r.detail;
    s.precision(2);
    s << std::fixed << " [" << r.seconds << "s]";
    return s.str();
}

}  // namespace altproj
