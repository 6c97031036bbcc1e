// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration and the runs behind the command-line tool.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eulerlab/bounds.hpp"
#include "eulerlab/csv.hpp"
#include "eulerlab/error_curve.hpp"
#include "eulerlab/models.hpp"
#include "eulerlab/quadrature.hpp"
#include "eulerlab/svg.hpp"

namespace eulerlab {

enum class RunMode { quick, desk, full };

struct ExperimentConfig {
    std::string model = "ex3";
    double horizon = 2.0;
    int k_min = 1;
    int k_max = 16;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 2024;
    std::string out;
    std::string svg;
    unsigned threads = 0;
    RunMode mode = RunMode::desk;

    /// Level range and sample count of a mode; quick = K<=10, n=1e4.
    static ExperimentConfig preset(RunMode mode) {
        ExperimentConfig c;
        c.mode = mode;
        if (mode == RunMode::quick) {
            c.k_max = 10;
            c.samples = 10'000;
        } else if (mode == RunMode::full) {
            c.k_max = 30;
        }
        return c;
    }

    void validate() const {
        const auto names = model_names();
        if (std::find(names.begin(), names.end(), model) == names.end())
            throw DomainError("unknown model '" + model + "'");
        if (!(horizon > 0.0) || !std::isfinite(horizon))
            throw DomainError("T must be positive and finite");
        if (k_min < 0 || k_max > 40 || k_min > k_max)
            throw DomainError("levels must satisfy 0 <= k-min <= k-max <= 40");
        if (samples == 0) throw DomainError("samples must be positive");
    }

    std::vector<int> levels() const {
        std::vector<int> out;
        for (int k = k_min; k <= k_max; ++k) out.push_back(k);
        return out;
    }

    Parallelism parallelism() const { return Parallelism{threads, 512}; }
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline bool all_passed(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

inline void print_checks(std::ostream& os, const std::vector<Check>& checks) {
    for (const auto& c : checks)
        os << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": ")
           << c.detail << '\n';
}

//---------------------------------------------------------------------------//
// Figure 1
//---------------------------------------------------------------------------//

/*!
 * Assertions on an error curve: strong >= weak on every row; for ex3 on
 * T = 2, weak + 3 stderr >= the lower bound wherever h <= 1/22; outside
 * quick mode the smallest weak error stays >= 5e-3.
 */
inline std::vector<Check> figure1_checks(const ErrorCurve& curve, const ExperimentConfig& cfg) {
    std::vector<Check> checks;
    for (const auto& r : curve.rows) {
        std::ostringstream os;
        os.precision(6);
        os << "N=" << r.steps << " strong=" << r.strong_error << " weak=" << r.weak_error;
        checks.push_back({"strong>=weak N=" + std::to_string(r.steps),
                          r.strong_error >= r.weak_error * (1.0 - 1e-12), os.str()});
    }
    if (curve.model == "ex3" && curve.horizon == 2.0) {
        for (const auto& r : curve.rows) {
            if (!(r.h <= 1.0 / 22.0)) continue;
            const double b = bound_theorem5(r.h);
            std::ostringstream os;
            os.precision(6);
            os << "weak=" << r.weak_error << " stderr=" << r.weak_stderr << " bound=" << b;
            checks.push_back({"lower bound N=" + std::to_string(r.steps),
                              r.weak_error + 3.0 * r.weak_stderr >= b, os.str()});
        }
        if (cfg.mode != RunMode::quick && !curve.rows.empty()) {
            double lo = INFINITY;
            for (const auto& r : curve.rows) lo = std::min(lo, r.weak_error);
            std::ostringstream os;
            os.precision(6);
            os << "min weak error " << lo;
            checks.push_back({"weak error floor 5e-3", lo >= 5e-3, os.str()});
        }
    }
    return checks;
}

inline ErrorCurve run_figure1(const ExperimentConfig& cfg) {
    cfg.validate();
    ErrorCurveOptions opts;
    opts.parallelism = cfg.parallelism();
    const SdeModel model = model_by_name(cfg.model);
    if (model.taming_required) opts.scheme = Scheme::tamed;
    return weak_strong_errors(model, cfg.horizon, cfg.levels(), cfg.samples,
                              SeedSpec{cfg.seed, 0}, opts);
}

/// Weak-error curve with the order-0 reference and the order-1/2 and order-1 guides.
inline LogLogPlot figure1_plot(const ErrorCurve& curve) {
    LogLogPlot plot;
    plot.title = "Euler weak error, " + curve.model + ", T = " + format_number(curve.horizon);
    plot.y_label = "||E[X(T)] - E[Y(T)]||";
    PlotSeries weak{"weak error", {}, {}, "#1f77b4", false, true};
    PlotSeries ref{"order 0 reference", {}, {}, "#d62728", true, false};
    PlotSeries half{"1/(15 sqrt N)", {}, {}, "#2ca02c", true, false};
    PlotSeries one{"1/(15 N)", {}, {}, "#9467bd", true, false};
    for (const auto& r : curve.rows) {
        const double n = static_cast<double>(r.steps);
        weak.x.push_back(n);
        weak.y.push_back(r.weak_error);
        if (r.steps >= 2) {
            ref.x.push_back(n);
            ref.y.push_back(order0_reference(n, curve.horizon));
        }
        half.x.push_back(n);
        half.y.push_back(order_half_line(n));
        one.x.push_back(n);
        one.y.push_back(order_one_line(n));
    }
    plot.series = {weak, ref, half, one};
    return plot;
}

//---------------------------------------------------------------------------//
// Fixtures
//---------------------------------------------------------------------------//

struct PinnedConstant {
    std::string name;
    double value = 0.0;
    std::string method;
    double cross_check = 0.0;
    std::string cross_method;

    double disagreement() const { return std::fabs(value - cross_check); }
};

inline constexpr double fixture_agreement = 1e-10;

/// Every pinned constant, each computed by two independent routes.
inline std::vector<PinnedConstant> pinned_constants() {
    std::vector<PinnedConstant> out;
    const std::uint64_t panels = std::uint64_t{1} << 20;
    out.push_back({"mollifier_integral", mollifier_integral(), "adaptive Simpson tol 1e-12",
                   composite_simpson(mollifier, 0.0, 1.0, panels).value,
                   "composite Simpson 2^20 panels"});
    out.push_back({"ex3_mean_x1_T2", outer_bump_integral(2.0), "adaptive Simpson tol 1e-12",
                   composite_simpson(outer_bump, 1.0, 2.0, panels).value,
                   "composite Simpson 2^20 panels"});

    auto bound_ld = [](long double h) {
        return static_cast<double>(std::exp(-14.0L * std::pow(std::fabs(std::log(h)), 2.0L / 3.0L)));
    };
    out.push_back({"bound_thm5_h=1/22", bound_theorem5(1.0 / 22.0), "double",
                   bound_ld(1.0L / 22.0L), "long double"});
    for (int k : {6, 10, 16}) {
        const double h = std::ldexp(2.0, -k);
        out.push_back({"bound_thm5_T=2_K=" + std::to_string(k), bound_theorem5(h), "double",
                       bound_ld(static_cast<long double>(h)), "long double"});
    }

    auto order0_ld = [](long double n, long double t) {
        const long double l = std::log(n), a = 1.0L / (2.0L * t);
        return static_cast<double>(1.0L / (15.0L * std::cbrt(l)) *
                                   std::exp(-a * std::pow(l - a * std::pow(l, 2.0L / 3.0L),
                                                          2.0L / 3.0L)));
    };
    out.push_back({"order0_ref_N=2_T=2", order0_reference(2.0, 2.0), "double",
                   order0_ld(2.0L, 2.0L), "long double"});

    const double hmax = std::numbers::pi / 2.0 * std::exp(-1.0);
    out.push_back({"lemma33_first_t=1_x=0_h=hmax", bound_lemma33_first(1.0, 0.0, hmax),
                   "bound evaluator", std::exp(-8.0), "closed form exp(-8)"});
    out.push_back({"lemma33_tail_factor_R", tail_factor_full_line(), "closed form",
                   composite_simpson(
                       [](double z) {
                           return std::exp(-72.0 * z * z - 0.5 * z * z) /
                                  std::sqrt(2.0 * std::numbers::pi);
                       },
                       -10.0, 10.0, panels)
                       .value,
                   "composite Simpson 2^20 panels"});
    return out;
}

/// Fixture text; throws IntegrationError when any pair disagrees by more than 1e-10.
inline std::string fixtures_text() {
    const auto consts = pinned_constants();
    std::ostringstream os;
    os << "# eulerlab pinned constants\n"
       << "# name = value ; method ; cross-check method ; |difference|\n";
    for (const auto& c : consts) {
        if (!(c.disagreement() <= fixture_agreement))
            throw IntegrationError("fixture '" + c.name + "': methods disagree by " +
                                   format_number(c.disagreement()));
        os << c.name << " = " << format_number(c.value) << " ; " << c.method << " ; "
           << c.cross_method << " ; " << format_number(c.disagreement()) << '\n';
    }
    return os.str();
}

}  // namespace eulerlab
