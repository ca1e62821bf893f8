#include "lobhawkes/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lobhawkes {

namespace {

[[nodiscard]] std::string format_fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

// Rescaled times tau = Lambda_i(t_k) at every type-i event, using only
// strictly earlier events (ties across components do not interact).
[[nodiscard]] std::vector<double> rescaled_times(const HawkesModel& model,
                                                 const EventStream& stream, int component) {
    std::vector<double> taus;
    if (model.kind() == KernelKind::Exponential) {
        // One pass: S[j] tracks sum of exp(-beta_ij * (t - t_m)) over past
        // type-j events, N[j] the past count, so
        // Lambda_i(t) = mu_i*t + sum_j (alpha_ij/beta_ij) * (N[j] - S[j]).
        std::array<double, 2> decayed{0.0, 0.0};
        std::array<double, 2> counts{0.0, 0.0};
        double prev = 0.0;
        std::size_t k = 0;
        const auto& events = stream.events;
        while (k < events.size()) {
            const double t = events[k].time;
            const double dt = t - prev;
            for (int j = 0; j < 2; ++j)
                decayed[j] *= std::exp(-model.kernels[component][j].beta * dt);
            prev = t;
            std::size_t group_end = k;
            while (group_end < events.size() && events[group_end].time == t) ++group_end;
            for (std::size_t m = k; m < group_end; ++m) {
                if (side_index(events[m].side) != component) continue;
                double value = model.mu[component] * t;
                for (int j = 0; j < 2; ++j) {
                    const KernelSpec& kernel = model.kernels[component][j];
                    value += kernel.alpha / kernel.beta * (counts[j] - decayed[j]);
                }
                taus.push_back(value);
            }
            for (std::size_t m = k; m < group_end; ++m) {
                const int j = side_index(events[m].side);
                counts[j] += 1.0;
                decayed[j] += 1.0;
            }
            k = group_end;
        }
    } else {
        for (std::size_t k = 0; k < stream.events.size(); ++k) {
            if (side_index(stream.events[k].side) != component) continue;
            taus.push_back(compensator_at(model, stream, component, stream.events[k].time));
        }
    }
    return taus;
}

} // namespace

double ks_statistic(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic requires non-empty samples");
    for (double x : samples)
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::invalid_argument("ks_statistic samples must be positive and finite");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 1.0 - std::exp(-samples[i]);
        const double above = (static_cast<double>(i) + 1.0) / n - cdf;
        const double below = cdf - static_cast<double>(i) / n;
        sup = std::max(sup, std::max(above, below));
    }
    return sup;
}

double ks_critical_1pct(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ks_critical_1pct requires n >= 1");
    return 1.628 / std::sqrt(static_cast<double>(n));
}

ResidualReport residuals(const HawkesModel& model, const EventStream& stream, Side component) {
    validate_model(model);
    validate_stream(stream);
    const int i = side_index(component);
    const std::vector<double> taus = rescaled_times(model, stream, i);
    if (taus.size() < 2)
        throw std::invalid_argument("residuals require at least 2 events of the component");

    ResidualReport report;
    report.component = component;
    report.residuals.reserve(taus.size() - 1);
    for (std::size_t k = 1; k < taus.size(); ++k)
        report.residuals.push_back(taus[k] - taus[k - 1]);
    report.ks_statistic = ks_statistic(report.residuals);
    report.ks_critical_1pct = ks_critical_1pct(report.residuals.size());
    report.pass = report.ks_statistic < report.ks_critical_1pct;
    return report;
}

ComparisonReport compare_kernels(const EventStream& stream, const FitConfig& cfg_exp,
                                 const FitConfig& cfg_pl) {
    if (cfg_exp.kind != KernelKind::Exponential || cfg_pl.kind != KernelKind::PowerLaw)
        throw std::invalid_argument("compare_kernels configs must be exponential then power-law");

    ComparisonReport report;
    report.exp_fit = fit(stream, cfg_exp);
    report.pl_fit = fit(stream, cfg_pl);
    report.delta_log_likelihood =
        report.exp_fit.neg_log_likelihood - report.pl_fit.neg_log_likelihood;
    report.delta_aic = report.pl_fit.aic - report.exp_fit.aic;
    report.winner =
        report.pl_fit.aic < report.exp_fit.aic ? KernelKind::PowerLaw : KernelKind::Exponential;
    for (int i = 0; i < 2; ++i) {
        const Side side = side_from_index(i);
        if (stream.count(side) < 2) continue;
        report.exp_residuals.push_back(residuals(report.exp_fit.model, stream, side));
        report.pl_residuals.push_back(residuals(report.pl_fit.model, stream, side));
    }
    return report;
}

void export_intensity(const HawkesModel& model, const EventStream& stream, double grid_step,
                      const std::string& csv_path, const std::optional<std::string>& svg_path) {
    const std::vector<IntensitySample> path = intensity_path(model, stream, grid_step);

    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    csv << "time,lambda_buy,lambda_sell\n";
    for (const IntensitySample& sample : path) {
        csv << format_fixed(sample.time, 9) << ',' << format_fixed(sample.lambda_buy, 9) << ','
            << format_fixed(sample.lambda_sell, 9) << '\n';
    }
    csv.flush();
    if (!csv) throw std::runtime_error("write failed: " + csv_path);

    if (!svg_path) return;

    const double width = 960.0, height = 540.0;
    const double left = 70.0, right = 20.0, top = 20.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    double y_max = 0.0;
    for (const IntensitySample& sample : path)
        y_max = std::max(y_max, std::max(sample.lambda_buy, sample.lambda_sell));
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;
    const double x_max = stream.horizon;

    const auto x_of = [&](double t) { return left + plot_w * (t / x_max); };
    const auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };
    const auto polyline_points = [&](bool buy) {
        std::string points;
        for (const IntensitySample& sample : path) {
            points += format_fixed(x_of(sample.time), 2);
            points += ',';
            points += format_fixed(y_of(buy ? sample.lambda_buy : sample.lambda_sell), 2);
            points += ' ';
        }
        if (!points.empty()) points.pop_back();
        return points;
    };

    std::ofstream svg(*svg_path);
    if (!svg) throw std::runtime_error("cannot open for writing: " + *svg_path);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n"
        << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">time (s)"
           "</text>\n"
        << "  <text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">intensity (events/s)</text>\n";
    svg << "  <text x=\"" << left << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n"
        << "  <text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_fixed(x_max, 2) << "</text>\n"
        << "  <text x=\"" << left - 6 << "\" y=\"" << top + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << format_fixed(y_max, 3) << "</text>\n";
    svg << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\""
        << polyline_points(true) << "\"/>\n"
        << "  <polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\""
        << polyline_points(false) << "\"/>\n";
    svg << "  <line x1=\"" << left + plot_w - 150 << "\" y1=\"" << top + 14 << "\" x2=\""
        << left + plot_w - 120 << "\" y2=\"" << top + 14
        << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
        << "  <text x=\"" << left + plot_w - 114 << "\" y=\"" << top + 18
        << "\" font-family=\"sans-serif\" font-size=\"12\">buy</text>\n"
        << "  <line x1=\"" << left + plot_w - 150 << "\" y1=\"" << top + 32 << "\" x2=\""
        << left + plot_w - 120 << "\" y2=\"" << top + 32
        << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
        << "  <text x=\"" << left + plot_w - 114 << "\" y=\"" << top + 36
        << "\" font-family=\"sans-serif\" font-size=\"12\">sell</text>\n";
    svg << "</svg>\n";
    svg.flush();
    if (!svg) throw std::runtime_error("write failed: " + *svg_path);
}

} // namespace lobhawkes
