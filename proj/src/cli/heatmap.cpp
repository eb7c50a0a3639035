#include "relcav/cli/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace relcav::cli {
namespace {

constexpr double kLeft = 90.0;
constexpr double kTop = 50.0;
constexpr double kPlot = 440.0;
constexpr double kBarLeft = kLeft + kPlot + 30.0;
constexpr double kBarWidth = 20.0;
constexpr double kWidth = kBarLeft + kBarWidth + 110.0;
constexpr double kHeight = kTop + kPlot + 70.0;

struct Rgb {
  double r, g, b;
};

// Viridis sampled at five points.
constexpr std::array<Rgb, 5> kRamp{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string color(double u) {
  if (std::isnan(u)) return "#bdbdbd";
  u = std::clamp(u, 0.0, 1.0) * (kRamp.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), kRamp.size() - 2);
  const double f = u - static_cast<double>(i);
  const auto mix = [f](double a, double b) { return static_cast<int>(std::lround(a + f * (b - a))); };
  return fmt::format("#{:02x}{:02x}{:02x}", mix(kRamp[i].r, kRamp[i + 1].r), mix(kRamp[i].g, kRamp[i + 1].g),
                     mix(kRamp[i].b, kRamp[i + 1].b));
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string comment_safe(std::string s) {
  for (std::size_t p = s.find("--"); p != std::string::npos; p = s.find("--")) s.replace(p, 2, "- -");
  return s;
}

}  // namespace

std::string heatmap_svg(const Eigen::MatrixXd& values, const std::vector<double>& y, const std::vector<double>& x,
                        const HeatmapLabels& labels) {
  const auto rows = values.rows();
  const auto cols = values.cols();
  if (rows == 0 || cols == 0 || static_cast<std::size_t>(rows) != y.size() ||
      static_cast<std::size_t>(cols) != x.size()) {
    throw DomainError("heatmap axes do not match the matrix");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values.data()[i];
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const double span = hi - lo;
  const auto unit = [&](double v) { return span > 0.0 ? (v - lo) / span : 0.5; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" viewBox=\"0 0 {:g} {:g}\">\n",
                   kWidth, kHeight, kWidth, kHeight);
  if (!labels.comment.empty()) s += fmt::format("<!-- {} -->\n", comment_safe(labels.comment));
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                   kLeft + kPlot / 2, kTop - 20, escape(labels.title));

  const double cw = kPlot / static_cast<double>(cols);
  const double ch = kPlot / static_cast<double>(rows);
  s += "<g shape-rendering=\"crispEdges\">\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double v = values(i, j);
      s += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n",
                       kLeft + j * cw, kTop + (rows - 1 - i) * ch, cw, ch, color(std::isfinite(v) ? unit(v) : NAN));
    }
  }
  s += "</g>\n";
  s += fmt::format("<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" fill=\"none\" stroke=\"black\"/>\n",
                   kLeft, kTop, kPlot, kPlot);

  // Ticks at both ends and the middle of each axis.
  const auto tick_text = [](double v) { return fmt::format("{:.4g}", v); };
  for (int q = 0; q <= 2; ++q) {
    const double f = q / 2.0;
    const double xv = x.front() + f * (x.back() - x.front());
    const double yv = y.front() + f * (y.back() - y.front());
    const double px = kLeft + (cw / 2) + f * (kPlot - cw);
    const double py = kTop + kPlot - (ch / 2) - f * (kPlot - ch);
    s += fmt::format("<line x1=\"{0:.3f}\" y1=\"{1:g}\" x2=\"{0:.3f}\" y2=\"{2:g}\" stroke=\"black\"/>\n", px,
                     kTop + kPlot, kTop + kPlot + 5);
    s += fmt::format("<text x=\"{:.3f}\" y=\"{:g}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                     px, kTop + kPlot + 20, tick_text(xv));
    s += fmt::format("<line x1=\"{0:g}\" y1=\"{1:.3f}\" x2=\"{2:g}\" y2=\"{1:.3f}\" stroke=\"black\"/>\n", kLeft - 5,
                     py, kLeft);
    s += fmt::format("<text x=\"{:g}\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
                     kLeft - 8, py + 4, tick_text(yv));
  }
  s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                   kLeft + kPlot / 2, kTop + kPlot + 45, escape(labels.x_label));
  s += fmt::format("<text x=\"{0:g}\" y=\"{1:g}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
                   "transform=\"rotate(-90 {0:g} {1:g})\">{2}</text>\n",
                   kLeft - 60, kTop + kPlot / 2, escape(labels.y_label));

  constexpr int kBarSteps = 64;
  const double step = kPlot / kBarSteps;
  for (int b = 0; b < kBarSteps; ++b) {
    s += fmt::format("<rect x=\"{:g}\" y=\"{:.3f}\" width=\"{:g}\" height=\"{:.3f}\" fill=\"{}\"/>\n", kBarLeft,
                     kTop + kPlot - (b + 1) * step, kBarWidth, step, color((b + 0.5) / kBarSteps));
  }
  s += fmt::format("<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" fill=\"none\" stroke=\"black\"/>\n",
                   kBarLeft, kTop, kBarWidth, kPlot);
  for (int q = 0; q <= 2; ++q) {
    const double f = q / 2.0;
    s += fmt::format("<text x=\"{:g}\" y=\"{:.3f}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                     kBarLeft + kBarWidth + 6, kTop + kPlot - f * kPlot + 4, fmt::format("{:.4g}", lo + f * span));
  }
  s += fmt::format("<text x=\"{0:g}\" y=\"{1:g}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
                   "transform=\"rotate(90 {0:g} {1:g})\">{2}</text>\n",
                   kBarLeft + kBarWidth + 85, kTop + kPlot / 2, escape(labels.colorbar_label));
  s += "</svg>\n";
  return s;
}

void render_heatmap(const SweepResult& res, const std::filesystem::path& path) {
  if (res.tau.size() < 2 || res.t.size() < 2) throw DomainError("a heatmap needs a two-variable sweep");
  HeatmapLabels labels;
  labels.title = "first-order correction to the smallest PT symplectic eigenvalue";
  labels.x_label = "coasting time t";
  labels.y_label = "acceleration proper time τ";
  labels.colorbar_label = "ν̃(1)_N";
  labels.comment = fmt::format("relcav {} config {}", res.version, res.config_hash);
  const auto svg = heatmap_svg(res.nu_tilde_first_order, res.tau, res.t, labels);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << svg;
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

}  // namespace relcav::cli
