#include "fuzzdss/aggregate.hpp"

#include <algorithm>
#include <cassert>

#include "fuzzdss/error.hpp"

namespace fuzzdss {

AggregatedOutput::AggregatedOutput(double lower, double upper)
    : vertices_{{lower, 0.0}, {upper, 0.0}} {}

AggregatedOutput::AggregatedOutput(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  assert(vertices_.size() >= 2);
}

double AggregatedOutput::operator()(double x) const noexcept {
  if (x < lower() || x > upper()) return 0.0;
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x,
                             [](const Vertex& v, double value) { return v.x < value; });
  if (it == vertices_.end()) return vertices_.back().y;
  if (it->x == x || it == vertices_.begin()) return it->y;
  const Vertex& right = *it;
  const Vertex& left = *(it - 1);
  const double t = (x - left.x) / (right.x - left.x);
  return left.y + t * (right.y - left.y);
}

double AggregatedOutput::area() const noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const auto& p = vertices_[i - 1];
    const auto& q = vertices_[i];
    total += 0.5 * (q.x - p.x) * (p.y + q.y);
  }
  return total;
}

std::optional<std::pair<double, double>> AggregatedOutput::support() const noexcept {
  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].y > 0.0) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) return std::nullopt;
  const double lo = *first > 0 ? vertices_[*first - 1].x : vertices_[*first].x;
  const double hi = last + 1 < vertices_.size() ? vertices_[last + 1].x : vertices_[last].x;
  return std::pair{lo, hi};
}

namespace {

double clipped_value(const ClippedSet& set, double x) noexcept {
  return std::min(set.level, set.mf(x));
}

}  // namespace

AggregatedOutput aggregate_clipped(double lower, double upper, std::span<const ClippedSet> sets) {
  std::vector<ClippedSet> active;
  for (const auto& set : sets) {
    if (set.level > 0.0) active.push_back({set.mf, std::min(set.level, 1.0)});
  }
  if (active.empty()) return AggregatedOutput(lower, upper);

  // Between consecutive knots every clipped set is linear.
  std::vector<double> knots{lower, upper};
  auto add_knot = [&](double x) {
    if (x > lower && x < upper) knots.push_back(x);
  };
  for (const auto& set : active) {
    for (double x : set.mf.breakpoints()) add_knot(x);
    for (double x : set.mf.level_crossings(set.level)) add_knot(x);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  // The max of linear pieces kinks where two of them cross.
  std::vector<double> xs;
  xs.reserve(knots.size() * 2);
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double x0 = knots[k];
    const double x1 = knots[k + 1];
    xs.push_back(x0);
    crossings.clear();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d0 = clipped_value(active[i], x0) - clipped_value(active[j], x0);
        const double d1 = clipped_value(active[i], x1) - clipped_value(active[j], x1);
        if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
          const double x = x0 + (x1 - x0) * (d0 / (d0 - d1));
          if (x > x0 && x < x1) crossings.push_back(x);
        }
      }
    }
    std::sort(crossings.begin(), crossings.end());
    xs.insert(xs.end(), crossings.begin(), crossings.end());
  }
  xs.push_back(knots.back());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Vertex> vertices;
  vertices.reserve(xs.size());
  for (double x : xs) {
    double y = 0.0;
    for (const auto& set : active) y = std::max(y, clipped_value(set, x));
    vertices.push_back({x, y});
  }
  return AggregatedOutput(std::move(vertices));
}

AggregatedOutput aggregate(const Model& model, std::span<const double> strengths) {
  if (strengths.size() != model.rules.size()) {
    throw ModelError("expected " + std::to_string(model.rules.size()) + " rule strengths, got " +
                     std::to_string(strengths.size()));
  }
  std::vector<ClippedSet> sets;
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    if (!(strengths[i] > 0.0)) continue;
    const auto* term = model.output.find_term(model.rules[i].consequent);
    if (!term) {
      throw ModelError("rule " + std::to_string(i + 1) + " concludes unknown output term '" +
                       model.rules[i].consequent + "'");
    }
    sets.push_back({term->mf, strengths[i]});
  }
  return aggregate_clipped(model.output.universe_min, model.output.universe_max, sets);
}

std::optional<double> defuzzify_centroid(const AggregatedOutput& agg) noexcept {
  double area = 0.0;
  double moment = 0.0;
  const auto vs = agg.vertices();
  for (std::size_t i = 1; i < vs.size(); ++i) {
    const auto& p = vs[i - 1];
    const auto& q = vs[i];
    const double h = q.x - p.x;
    area += 0.5 * h * (p.y + q.y);
    moment += h / 6.0 * (p.y * (2.0 * p.x + q.x) + q.y * (p.x + 2.0 * q.x));
  }
  if (!(area > 0.0)) return std::nullopt;
  const double centroid = moment / area;
  return std::clamp(centroid, agg.lower(), agg.upper());
}

}  // namespace fuzzdss
