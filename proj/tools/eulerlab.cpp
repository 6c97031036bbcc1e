// SPDX-License-Identifier: Apache-2.0
//
// eulerlab: experiment runner for the Euler error curves, the analytic bound
// suites and the regularity probes. Exit status 0 means every assertion held,
// 1 means at least one failed, 2 means bad input.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eulerlab/eulerlab.hpp"

using namespace eulerlab;

namespace {

struct Options {
    ExperimentConfig cfg;
    bool quick = false;
    bool full = false;

    // bounds-check
    double perturb = 0.0;
    double single_h = 0.0;
    std::uint64_t cases = 1000;
    std::uint64_t lemma33_samples = 100'000;

    // probe
    std::string probe_type;
    std::vector<double> x;
    std::vector<double> direction{0.0, 0.0, 1.0};
    double t = 1.0;
    std::vector<double> deltas{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    int path_level = 8;
    bool use_euler = false;
    std::string expect = "rough";
    double x2 = 2.0;
    std::vector<double> h_list{1e-1, 1e-2, 1e-3, 1e-4};
    double cap = 1e6;

    // simulate
    int level = 10;
    std::string scheme = "auto";
};

/// Output sink: the named file, or stdout when no path was given.
template <class Writer>
void emit(const std::string& path, Writer&& writer) {
    if (path.empty()) {
        writer(std::cout);
        std::cout.flush();
    } else {
        write_file(path, writer);
    }
}

std::ostream& report_stream(const Options& o) { return o.cfg.out.empty() ? std::cerr : std::cout; }

int finish(std::ostream& report, const std::vector<Check>& checks) {
    print_checks(report, checks);
    const bool ok = all_passed(checks);
    report << (ok ? "all checks passed" : "some checks FAILED") << '\n';
    return ok ? 0 : 1;
}

int cmd_figure1(const Options& o) {
    const auto curve = run_figure1(o.cfg);
    emit(o.cfg.out, [&](std::ostream& os) { write_figure1_csv(os, curve); });
    if (!o.cfg.svg.empty())
        write_file(o.cfg.svg, [&](std::ostream& os) { render_loglog_svg(os, figure1_plot(curve)); });
    return finish(report_stream(o), figure1_checks(curve, o.cfg));
}

int cmd_bounds_check(const Options& o) {
    std::ostream& os = std::cout;
    if (o.single_h != 0.0) {
        const double gap = check_lemma53(o.single_h, mollifier_integral() + o.perturb);
        const bool ok = gap >= o.single_h / 20.0 && gap <= 2.0 * o.single_h;
        os << "h=" << format_number(o.single_h) << " gap=" << format_number(gap) << ' '
           << (ok ? "in" : "NOT in") << " [h/20, 2h]\n";
        return ok ? 0 : 1;
    }
    std::vector<SuiteReport> suites;
    suites.push_back(run_lemma53_suite(3, 20, mollifier_integral() + o.perturb));
    suites.push_back(run_lemma32_suite(o.cases, SeedSpec{o.cfg.seed, 32}));
    suites.push_back(run_lemma52_suite(o.cases, SeedSpec{o.cfg.seed, 52}));
    if (o.lemma33_samples > 0)
        suites.push_back(
            run_lemma33_suite(o.lemma33_samples, SeedSpec{o.cfg.seed, 33}, o.cfg.parallelism()));
    bool ok = true;
    for (const auto& s : suites) {
        os << (s.passed() ? "PASS " : "FAIL ") << s.name << ": " << s.cases << " cases, "
           << s.violations << " violations, worst margin " << format_number(s.worst_margin)
           << '\n';
        for (const auto& f : s.failures) os << "  " << f << '\n';
        ok = ok && s.passed();
    }
    return ok ? 0 : 1;
}

int cmd_probe_holder(const Options& o, std::uint64_t n) {
    const SdeModel model = model_by_name(o.cfg.model);
    const StateVector x = o.x.empty() ? StateVector(model.dim, 0.0) : StateVector(o.x);
    HolderOptions ho;
    ho.path_level = o.path_level;
    ho.use_euler = o.use_euler;
    ho.parallelism = o.cfg.parallelism();
    const auto probe = holder_probe(
        model, x, StateVector(o.direction), o.t, [](const StateVector& y) { return y[0]; },
        o.deltas, n, SeedSpec{o.cfg.seed, 7}, ho);
    emit(o.cfg.out, [&](std::ostream& os) { write_holder_csv(os, probe); });

    std::vector<Check> checks;
    std::ostringstream fit;
    fit << "fitted alpha " << format_number(probe.fitted_alpha);
    if (o.expect == "smooth") {
        checks.push_back({"slope within 0.05 of 1",
                          std::fabs(probe.fitted_alpha - 1.0) <= 0.05, fit.str()});
    } else if (o.expect == "rough") {
        const auto scaled = probe.scaled(0.5);
        bool increasing = true;
        for (std::size_t i = 1; i < scaled.size(); ++i) increasing &= scaled[i] > scaled[i - 1];
        checks.push_back({"increment/sqrt(delta) strictly increasing", increasing, fit.str()});
    } else {
        checks.push_back({"probe completed", true, fit.str()});
    }
    return finish(report_stream(o), checks);
}

int cmd_probe_lipschitz(const Options& o, std::uint64_t n) {
    LipschitzOptions lo;
    lo.level = o.level;
    lo.cap = o.cap;
    lo.parallelism = o.cfg.parallelism();
    const auto rows = lipschitz_blowup_probe(o.t, o.x2, o.h_list, n, SeedSpec{o.cfg.seed, 23}, lo);
    emit(o.cfg.out, [&](std::ostream& os) { write_lipschitz_csv(os, rows); });

    // Sort by decreasing h; the truncated ratio should grow as h shrinks.
    std::vector<LipschitzRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const LipschitzRow& a, const LipschitzRow& b) { return a.h > b.h; });
    std::vector<Check> checks;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const auto& a = sorted[i - 1];
        const auto& b = sorted[i];
        const double slack = 3.0 * std::hypot(a.truncated_stderr, b.truncated_stderr);
        checks.push_back({"ratio(h=" + format_number(b.h) + ") >= ratio(h=" + format_number(a.h) +
                              ") - 3 stderr",
                          b.truncated_mean >= a.truncated_mean - slack,
                          format_number(b.truncated_mean) + " vs " +
                              format_number(a.truncated_mean)});
    }
    if (sorted.size() >= 2)
        checks.push_back({"ratio at smallest h exceeds ratio at largest h",
                          sorted.back().truncated_mean > sorted.front().truncated_mean, ""});
    return finish(report_stream(o), checks);
}

int cmd_probe(const Options& o, bool samples_given) {
    if (o.probe_type == "holder")
        return cmd_probe_holder(o, samples_given ? o.cfg.samples : o.quick ? 100'000 : 1'000'000);
    return cmd_probe_lipschitz(o, samples_given ? o.cfg.samples : 10'000);
}

int cmd_fixtures(const Options& o) {
    const std::string text = fixtures_text();
    emit(o.cfg.out, [&](std::ostream& os) { os << text; });
    return 0;
}

int cmd_simulate(const Options& o) {
    const SdeModel model = model_by_name(o.cfg.model);
    const StateVector x0 = o.x.empty() ? StateVector(model.dim, 0.0) : StateVector(o.x);
    Scheme scheme = model.taming_required ? Scheme::tamed : Scheme::plain;
    if (o.scheme == "plain") scheme = Scheme::plain;
    if (o.scheme == "tamed") scheme = Scheme::tamed;
    const TimeGrid grid(o.cfg.horizon, o.level);
    const auto paths = sample_model_paths(model, SeedSpec{o.cfg.seed, 0}, grid);
    const auto traj = euler_run(model, x0, paths, EulerConfig(grid, scheme));
    emit(o.cfg.out, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
    if (traj.blow_up_index())
        std::cerr << "trajectory crossed the blow-up threshold at step " << *traj.blow_up_index()
                  << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler-Maruyama error curves, bound suites and regularity probes"};
    app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    auto& c = o.cfg;
    auto* opt_model = app.add_option("--model", c.model, "Model name")
                          ->check(CLI::IsMember(model_names()));
    app.add_option("--T", c.horizon, "Time horizon");
    auto* opt_kmin = app.add_option("--k-min", c.k_min, "Coarsest level (N = 2^K)");
    auto* opt_kmax = app.add_option("--k-max", c.k_max, "Finest level");
    auto* opt_samples = app.add_option("--samples", c.samples, "Monte Carlo sample count");
    app.add_option("--seed", c.seed, "Master seed");
    app.add_option("--out", c.out, "Output file (stdout when omitted)");
    app.add_option("--svg", c.svg, "Optional log-log SVG plot (figure1)");
    app.add_option("--threads", c.threads, "Worker threads (0 = EULERLAB_THREADS or all cores)");
    auto* opt_quick = app.add_flag("--quick", o.quick, "Small run: K <= 10, n = 1e4");
    auto* opt_full = app.add_flag("--full", o.full, "Long run: K up to 30, n = 1e5");
    opt_quick->excludes(opt_full);

    auto* fig = app.add_subcommand("figure1", "Weak and strong error curve, CSV and SVG");

    auto* bounds = app.add_subcommand("bounds-check", "Run the analytic inequality suites");
    bounds->add_option("--perturb-constant", o.perturb,
                       "Add this to the mollifier integral (fault injection)");
    bounds->add_option("--step-size", o.single_h, "Evaluate the mollifier gap at one h only");
    bounds->add_option("--cases", o.cases, "Randomized cases per property suite");
    bounds->add_option("--lemma33-samples", o.lemma33_samples,
                       "Monte Carlo samples per Gaussian bound case (0 skips)");

    auto* probe = app.add_subcommand("probe", "Hölder or Lipschitz probe");
    probe->add_option("--type", o.probe_type, "holder or lipschitz")
        ->required()
        ->check(CLI::IsMember({"holder", "lipschitz"}));
    probe->add_option("--x", o.x, "Base point (holder), comma separated")->delimiter(',');
    probe->add_option("--direction", o.direction, "Perturbation direction (holder)")
        ->delimiter(',');
    probe->add_option("--t", o.t, "Evaluation time");
    probe->add_option("--deltas", o.deltas, "Decreasing perturbation sizes (holder)")
        ->delimiter(',');
    probe->add_option("--path-level", o.path_level, "Brownian grid level on [0, t] (holder)");
    probe->add_flag("--euler", o.use_euler, "Use Euler instead of the exact solver (holder)");
    probe->add_option("--expect", o.expect, "Assertion: rough, smooth or none (holder)")
        ->check(CLI::IsMember({"rough", "smooth", "none"}));
    probe->add_option("--x2", o.x2, "Second coordinate of the start (lipschitz)");
    probe->add_option("--h-list", o.h_list, "Initial first coordinates (lipschitz)")
        ->delimiter(',');
    probe->add_option("--level", o.level, "Euler grid level on [0, t] (lipschitz)");
    probe->add_option("--cap", o.cap, "Truncation level of the ratio (lipschitz)");

    auto* fixtures = app.add_subcommand("fixtures", "Write the pinned constants");

    auto* simulate = app.add_subcommand("simulate", "Dump one Euler trajectory");
    simulate->add_option("--level", o.level, "Grid level (N = 2^level)");
    simulate->add_option("--x0", o.x, "Initial state, comma separated")->delimiter(',');
    simulate->add_option("--scheme", o.scheme, "plain, tamed or auto")
        ->check(CLI::IsMember({"plain", "tamed", "auto"}));

    CLI11_PARSE(app, argc, argv);

    try {
        // Mode presets fill only what neither the command line nor the config file set.
        const ExperimentConfig preset = ExperimentConfig::preset(
            o.quick ? RunMode::quick : o.full ? RunMode::full : RunMode::desk);
        c.mode = preset.mode;
        if (opt_kmin->count() == 0) c.k_min = preset.k_min;
        if (opt_kmax->count() == 0) c.k_max = preset.k_max;
        if (opt_samples->count() == 0) c.samples = preset.samples;
        if (probe->parsed() && opt_model->count() == 0) c.model = "ex2b";
        c.validate();

        if (fig->parsed()) return cmd_figure1(o);
        if (bounds->parsed()) return cmd_bounds_check(o);
        if (probe->parsed()) return cmd_probe(o, opt_samples->count() > 0);
        if (fixtures->parsed()) return cmd_fixtures(o);
        if (simulate->parsed()) return cmd_simulate(o);
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
