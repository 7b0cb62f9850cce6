#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

#include "fracheat/error.hpp"
#include "runner.hpp"

namespace {

enum Exit { kPass = 0, kContractFail = 1, kUsage = 2, kIo = 3 };

}  // namespace

int main(int argc, char** argv) {
    using namespace fracheat;
    cli::Params p;

    CLI::App app{"Weak Zygmund norms, fractional heat semigroups and critical mild solutions"};
    app.set_config("--config", "", "Flat key=value file; command-line values win");
    app.require_subcommand(1);

    app.add_option("--out", p.out, "Output directory")->capture_default_str();
    app.add_option("--seed", p.seed, "Seed for randomized corpora")->capture_default_str();
    app.add_option("--grid-m", p.grid_m, "Points per axis (power of two)")->capture_default_str();
    app.add_option("--box-l", p.box_l, "Box half-width L")->capture_default_str();
    app.add_option("--n", p.n, "Spatial dimension (1 or 2)")->capture_default_str();
    app.add_option("--theta", p.theta, "Order theta in (0, 2]")->capture_default_str();
    app.add_option("--q", p.q, "Integrability index (inf allowed where meaningful)")->capture_default_str();
    app.add_option("--alpha", p.alpha, "Logarithmic exponent (default depends on the command)");
    app.add_option("--beta", p.beta, "Target logarithmic exponent")->capture_default_str();
    app.add_option("--gamma", p.gamma, "Secondary exponent")->capture_default_str();
    app.add_option("--r", p.r, "Source integrability index")->capture_default_str();
    app.add_option("--rho", p.rho, "Uniformly local ball radius");
    app.add_option("--T", p.T, "Time horizon")->capture_default_str();
    app.add_option("--S", p.S, "Upper limit S of the second weighted integral")->capture_default_str();
    app.add_option("--variant", p.variant, "Weighted integral variant (1, 2, 3)")->capture_default_str();
    app.add_option("--check", p.check, "verify: lemma31, pure_log, lemma32, prop31, prop32, phi_c_bound, smoothing")
        ->capture_default_str();
    app.add_option("--family", p.family, "norm: frak, zygmund, weak_zygmund, doublestar, all")->capture_default_str();
    app.add_option("--profile", p.profile, "indicator, phi_c, gaussian, bumps, random")->capture_default_str();
    app.add_option("--radius", p.radius, "Profile radius")->capture_default_str();
    app.add_option("--prop", p.prop, "appendix: A1 or A2")->capture_default_str();
    app.add_option("--n-max", p.n_max, "appendix A2: largest n")->capture_default_str();
    app.add_option("--lo", p.lo, "Lower end of the s or t grid");
    app.add_option("--hi", p.hi, "Upper end of the s or t grid");
    app.add_option("--points", p.points, "Grid points for sweeps")->capture_default_str();
    app.add_option("--times", p.times, "kernel: comma-separated times")->delimiter(',')->capture_default_str();
    app.add_option("--x-max", p.x_max, "kernel: largest |x|")->capture_default_str();
    app.add_option("--eps", p.eps, "solve: amplitude of the initial data")->capture_default_str();
    app.add_option("--eps-grid", p.eps_grid, "scan: ascending comma-separated amplitudes")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--target-ratio", p.target_ratio, "scan: bisection stops at eps_blow/eps_ok <= this")
        ->capture_default_str();
    app.add_option("--steps", p.steps, "solve/scan: time steps N_t")->capture_default_str();
    app.add_option("--max-sweeps", p.max_sweeps, "solve/scan: Picard sweep limit")->capture_default_str();
    app.add_option("--tol", p.tolerance, "solve/scan: relative d_X tolerance")->capture_default_str();

    const std::map<std::string, std::pair<std::string, std::function<void(cli::Run&)>>> commands{
        {"norm", {"Evaluate a norm family on a profile", cli::run_norm}},
        {"kernel", {"Tabulate G_theta against its majorant", cli::run_kernel}},
        {"verify", {"Run one estimate check", cli::run_verify}},
        {"solve", {"Picard solve of the critical problem", cli::run_solve}},
        {"scan", {"Bracket the small-data threshold in eps", cli::run_scan}},
        {"appendix", {"Inclusion chain (A1) or ratio collapse (A2)", cli::run_appendix}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) subs[name] = app.add_subcommand(name, entry.first)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        cli::Run run(p);
        for (const auto& [name, sub] : subs)
            if (*sub) commands.at(name).second(run);
        run.emit();
        for (const auto& row : run.summary())
            if (!row.pass) std::cerr << "contract failed: " << row.subcommand << ' ' << row.check << '\n';
        return run.all_pass() ? kPass : kContractFail;
    } catch (const PreconditionError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kContractFail;
    }
}
