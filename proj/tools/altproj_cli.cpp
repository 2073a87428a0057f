// altproj: command-line front end for cyclic alternating projection experiments.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "altproj/cli.hpp"

int main(int argc, char** argv)
{
    using altproj::Command;
    CLI::App app{"Cyclic alternating projections: geometry, rates, numerical range, "
                 "Ritt diagnostics, fractional decay and slow vectors."};
    app.footer("Exit codes: 0 ok, 2 parse or input error, 3 numerical-contract failure, "
               "4 capacity (model too small, series or tail cap reached).");
    app.require_subcommand(1);

    altproj::ExperimentConfig cfg;
    std::uint64_t seed = 0;
    int n_max = 0;
    const std::map<std::string, std::pair<Command, std::string>> commands = {
        {"geometry", {Command::geometry, "Friedrichs number, inclinations and rate base (CSV)"}},
        {"iterate", {Command::iterate, "error trace with both rate bounds (CSV)"}},
        {"numrange", {Command::numrange, "numerical range boundary and containment verdict (CSV)"}},
        {"ritt", {Command::ritt, "power and resolvent profiles (CSV)"}},
        {"fracpow", {Command::fracpow, "decay slopes for x in Ran(I-T)^alpha (CSV)"}},
        {"slowvec", {Command::slowvec, "slow vector for r_n = 1/log(n+2) on a block model (CSV)"}},
        {"suite", {Command::suite, "full acceptance battery, one PASS/FAIL line per criterion"}},
    };
    std::map<CLI::App*, Command> lookup;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.second);
        lookup[sub] = entry.first;
        sub->add_option("--out", cfg.out_path, "output path (written atomically; default stdout)");
        sub->add_option("--seed", seed, "seed (mandatory for geometry, fracpow, suite)");
        if (entry.first == Command::suite) {
            sub->add_option("--fixtures", cfg.fixtures_dir, "directory of *.inst fixtures");
            sub->add_option("--only", cfg.only, "criterion ids to run");
            continue;
        }
        sub->add_option("--instance", cfg.instance_path, "instance file")->required();
        sub->add_option("--n-max", n_max, "iteration horizon");
        sub->add_option("--tol", cfg.tol, "tolerance");
        sub->add_option("--angles", cfg.angles, "boundary or resolvent angle count");
        sub->add_option("--slack", cfg.slack, "containment slack");
        sub->add_option("--alpha", cfg.alphas, "alpha list for fracpow")->delimiter(',');
        sub->add_option("--eps", cfg.eps, "norm slack for slowvec");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : altproj::kExitParse;
    }
    for (const auto& [sub, cmd] : lookup) {
        if (!sub->parsed())
            continue;
        cfg.command = cmd;
        if (sub->count("--seed"))
            cfg.seed = seed;
        if (sub->get_option_no_throw("--n-max") && sub->count("--n-max"))
            cfg.n_max = n_max;
    }
    return altproj::run(cfg, std::cout, std::cerr);
}
