#include "altproj/cli.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "altproj/acceptance.hpp"
#include "altproj/errors.hpp"
#include "altproj/fracpow.hpp"
#include "altproj/geometry.hpp"
#include "altproj/models.hpp"
#include "altproj/report.hpp"
#include "altproj/spectral.hpp"

namespace altproj {

namespace {

InstanceSpec load(const ExperimentConfig& cfg)
{
    if (cfg.instance)
        return *cfg.instance;
    if (cfg.instance_path.empty())
        throw InputError("--instance is required");
    return parse_instance_file(cfg.instance_path);
}

Seed require_seed(const ExperimentConfig& cfg, const char* command)
{
    if (!cfg.seed)
        throw InputError(std::string(command) + " is randomized: --seed is required");
    return *cfg.seed;
}

const std::vector<Subspace>& single_family(const Instance& inst, const char* command)
{
    if (inst.families.size() != 1)
        throw InputError(std::string(command) + " needs a single subspace family, not a convex combination");
    return inst.families.front();
}

void emit(const ExperimentConfig& cfg, std::ostream& out, const std::string& csv)
{
    if (cfg.out_path.empty())
        out << csv;
    else
        atomic_write(cfg.out_path, csv);
}

int cmd_geometry(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log)
{
    const Seed seed = require_seed(cfg, "geometry");
    const Instance inst = materialize(load(cfg));
    const auto& fam = single_family(inst, "geometry");
    const Subspace m = intersection(fam);
    const GeometryReport rep = analyze_geometry(fam, m, {8, seed});
    std::ostringstream csv;
    write_geometry_csv(csv, rep);
    emit(cfg, out, csv.str());
    bool ok = true;
    for (const auto& chk : sandwich_check(rep)) {
        log << (chk.satisfied ? "ok   " : "FAIL ") << chk.name << " slack " << format_real(chk.slack)
            << (chk.heuristic ? " (estimate comparison)" : "") << "\n";
        if (!chk.heuristic && !chk.satisfied)
            ok = false;
    }
    return ok ? kExitOk : kExitContract;
}

int cmd_iterate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log)
{
    const Instance inst = materialize(load(cfg));
    const auto& fam = single_family(inst, "iterate");
    const CyclicProduct cp = build_cyclic(fam);
    Vector x;
    if (cfg.seed) {
        std::mt19937_64 rng(*cfg.seed);
        std::normal_distribution<Real> g;
        x.resize(cp.dim());
        for (Index i = 0; i < cp.dim(); ++i)
            x(i) = Complex(g(rng), g(rng));
        x /= x.norm();
    } else {
        // Without a seed the start is the worst-case unit vector for one sweep.
        const Matrix e = cp.T() - cp.PM().matrix();
        Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullV);
        x = svd.matrixV().col(0);
    }
    const Real c = friedrichs_number(fam, cp.M());
    const Real i2 = iota2(fam, cp.M()).value;
    const auto tr = iterate(cp, x, cfg.n_max.value_or(100), {c, i2});
    std::ostringstream csv;
    write_trace_csv(csv, tr);
    emit(cfg, out, csv.str());
    for (std::size_t n = 0; n < tr.errors.size(); ++n) {
        if (tr.errors[n] > tr.bound_c[n] + 1e-9 || tr.errors[n] > tr.bound_iota2[n] + 1e-9) {
            log << "FAIL error exceeds rate bound at n = " << n << "\n";
            return kExitContract;
        }
    }
    log << "ok   errors within both rate bounds\n";
    return kExitOk;
}

Matrix combined_operator(const Instance& inst, Real& c, int& N, Real& theta)
{
    std::vector<CyclicProduct> cps;
    theta = 0.0;
    for (const auto& fam : inst.families) {
        cps.push_back(build_cyclic(fam));
        c = friedrichs_number(fam, cps.back().M());
        N = cps.back().N();
        theta = std::max(theta, theta0(c, N));
    }
    if (cps.size() == 1)
        return cps.front().T();
    std::vector<const CyclicProduct*> ptrs;
    for (const auto& cp : cps)
        ptrs.push_back(&cp);
    return convex_combination(ptrs, inst.weights);
}

int cmd_numrange(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log)
{
    const Instance inst = materialize(load(cfg));
    Real c = 0.0, theta = 0.0;
    int N = 2;
    const Matrix T = combined_operator(inst, c, N, theta);
    const ContainmentReport rep = inst.families.size() == 1
                                      ? containment_check(T, c, N, cfg.angles, cfg.slack)
                                      : stolz_containment_check(T, theta, cfg.angles, cfg.slack);
    std::ostringstream csv;
    write_boundary_csv(csv, rep);
    emit(cfg, out, csv.str());
    log << (rep.passed ? "ok   " : "FAIL ") << "containment, theta0 = " << format_real(rep.theta0)
        << ", worst margin = " << format_real(rep.worst_margin) << "\n";
    return rep.passed ? kExitOk : kExitContract;
}

int cmd_ritt(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log)
{
    const Instance inst = materialize(load(cfg));
    Real c = 0.0, theta = 0.0;
    int N = 2;
    const Matrix T = combined_operator(inst, c, N, theta);
    const auto power = ritt_power_diagnostic(T, cfg.n_max.value_or(500));
    const auto res = resolvent_profile(T, default_radii(), cfg.angles);
    std::ostringstream csv;
    write_ritt_csv(csv, power, res);
    emit(cfg, out, csv.str());
    log << "sup n||T^n(I-T)|| = " << format_real(power.sup) << " at n = " << power.argmax
        << (power.tail_monotone ? ", tail non-increasing" : ", tail NOT monotone") << "\n";
    return std::isfinite(power.sup) ? kExitOk : kExitContract;
}

int cmd_fracpow(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log)
{
    const Seed seed = require_seed(cfg, "fracpow");
    const Instance inst = materialize(load(cfg));
    const auto& fam = single_family(inst, "fracpow");
    const CyclicProduct cp = build_cyclic(fam);
    std::vector<Real> weights;
    if (inst.block_model)
        weights = inst.block_model->square_summable_weights(2.0);
    const int n_max = cfg.n_max.value_or(1000);
    if (n_max < 50)
        throw InputError("fracpow needs --n-max >= 50");
    std::vector<DecayReport> reports;
    for (Real alpha : cfg.alphas) {
        const AlphaVector av = make_alpha_vector(cp, alpha, seed, weights);
        const auto tr = iterate(cp, av.x, n_max);
        reports.push_back(decay_report(tr, alpha, n_max / 10, n_max));
        log << "alpha " << format_real(alpha) << ": slope " << format_real(reports.back().slope) << "\n";
    }
    std::ostringstream csv;
    write_decay_csv(csv, reports);
    emit(cfg, out, csv.str());
    return kExitOk;
}

int cmd_slowvec(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log)
{
    const Instance inst = materialize(load(cfg));
    if (!inst.block_model)
        throw InputError("slowvec needs a block_aligned instance");
    const auto& model = *inst.block_model;
    const int horizon = cfg.n_max.value_or(1000);
    auto rn = [](int n) { return 1.0 / std::log(n + 2.0); };
    const auto sv = slow_vector(model, rn, horizon, cfg.eps);
    const CyclicProduct cp = build_cyclic(model.subspaces());
    const auto tr = iterate(cp, sv.x, horizon);
    std::ostringstream csv;
    csv << "n,error,target\n";
    bool ok = sv.x.norm() <= (1.0 + cfg.eps) * rn(0);
    for (int n = 0; n <= horizon; ++n) {
        csv << n << ',' << format_real(tr.errors[n]) << ',' << format_real(rn(n)) << '\n';
        ok = ok && tr.errors[n] >= rn(n);
    }
    std::ostringstream vec;
    vec << "index,re,im\n";
    for (Index i = 0; i < sv.x.size(); ++i)
        vec << i << ',' << format_real(sv.x(i).real()) << ',' << format_real(sv.x(i).imag()) << '\n';
    emit(cfg, out, csv.str());
    if (!cfg.out_path.empty())
        atomic_write(cfg.out_path + ".x.csv", vec.str());
    log << (ok ? "ok   " : "FAIL ") << sv.blocks_used.size() << " block(s), ||x||/r_0 = "
        << format_real(sv.x.norm() / rn(0)) << "\n";
    return ok ? kExitOk : kExitContract;
}

int cmd_suite(const ExperimentConfig& cfg, std::ostream& out, std::ostream&)
{
    AcceptanceOptions opt;
    opt.seed = require_seed(cfg, "suite");
    opt.fixture_dir = cfg.fixtures_dir;
    opt.only = cfg.only;
    std::ostringstream summary;
    const auto results = run_acceptance(opt, &out);
    bool ok = true;
    for (const auto& r : results) {
        summary << format_result(r) << "\n";
        ok = ok && r.passed;
    }
    if (!cfg.out_path.empty())
        atomic_write(cfg.out_path, summary.str());
    return ok ? kExitOk : kExitContract;
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& log)
{
    try {
        if (!(config.tol > 0.0) || !(config.slack > 0.0) || !(config.eps > 0.0))
            throw InputError("tolerances must be positive");
        switch (config.command) {
        case Command::geometry:
            return cmd_geometry(config, out, log);
        case Command::iterate:
            return cmd_iterate(config, out, log);
        case Command::numrange:
            return cmd_numrange(config, out, log);
        case Command::ritt:
            return cmd_ritt(config, out, log);
        case Command::fracpow:
            return cmd_fracpow(config, out, log);
        case Command::slowvec:
            return cmd_slowvec(config, out, log);
        case Command::suite:
            return cmd_suite(config, out, log);
        }
    } catch (const ParseError& e) {
        log << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InputError& e) {
        log << "input error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CapacityError& e) {
        log << "capacity: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << "\n";
        return kExitContract;
    }
    return kExitParse;
}

}  // namespace altproj
