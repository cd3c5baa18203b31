#include "ripc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "ripc/error.hpp"
#include "ripc/rng.hpp"

namespace ripc {

InputSeries generate_input(std::size_t length, std::uint64_t seed) {
  return generate_input(Phases{0, length, 0}, seed);
}

InputSeries generate_input(const Phases& phases, std::uint64_t seed) {
  if (phases.total() == 0) throw InvalidArgument("generate_input: empty series requested");
  InputSeries series;
  series.phases = phases;
  series.seed = seed;
  series.values.resize(phases.total());
  Philox4x32 rng(seed, purpose_tag("input"));
  for (double& v : series.values) v = uniform(rng, -1.0, 1.0);
  return series;
}

double legendre(int degree, double x) {
  if (degree <= 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < degree; ++n) {
    const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double normalized_legendre(int degree, double x) {
  return std::sqrt(2.0 * degree + 1.0) * legendre(degree, x);
}

BasisFunction::BasisFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw InvalidArgument("BasisFunction: at least one term required");
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.delay < b.delay; });
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].degree < 1 || terms_[i].delay < 0)
      throw InvalidArgument("BasisFunction: degrees must be >= 1 and delays >= 0");
    if (i > 0 && terms_[i].delay == terms_[i - 1].delay)
      throw InvalidArgument("BasisFunction: delays must be pairwise distinct");
  }
}

int BasisFunction::total_degree() const noexcept {
  int sum = 0;
  for (const Term& t : terms_) sum += t.degree;
  return sum;
}

int BasisFunction::max_delay() const noexcept {
  return terms_.empty() ? 0 : terms_.back().delay;
}

double BasisFunction::evaluate(const InputSeries& input, std::size_t t) const {
  double value = 1.0;
  for (const Term& term : terms_)
    value *= normalized_legendre(term.degree, input[t - static_cast<std::size_t>(term.delay)]);
  return value;
}

std::string BasisFunction::label() const {
  std::string out;
  for (const Term& t : terms_) {
    if (!out.empty()) out += '*';
    out += fmt::format("P{}(t-{})", t.degree, t.delay);
  }
  return out;
}

std::strong_ordering BasisFunction::operator<=>(const BasisFunction& other) const {
  if (auto c = total_degree() <=> other.total_degree(); c != 0) return c;
  if (auto c = terms_.size() <=> other.terms_.size(); c != 0) return c;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (auto c = terms_[i].delay <=> other.terms_[i].delay; c != 0) return c;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (auto c = terms_[i].degree <=> other.terms_[i].degree; c != 0) return c;
  return std::strong_ordering::equal;
}

std::vector<double> target_series(const BasisFunction& b, const InputSeries& input,
                                  std::size_t first, std::size_t last) {
  if (first < static_cast<std::size_t>(b.max_delay()))
    throw InsufficientHistory(fmt::format("target {} needs {} steps of history, first step is {}",
                                          b.label(), b.max_delay(), first));
  if (last > input.size() || first > last)
    throw InvalidArgument("target_series: step range outside the input series");
  std::vector<double> out;
  out.reserve(last - first);
  for (std::size_t t = first; t < last; ++t) out.push_back(b.evaluate(input, t));
  return out;
}

std::vector<double> target_series(const BasisFunction& b, const InputSeries& input) {
  const auto first = static_cast<std::size_t>(b.max_delay());
  if (first >= input.size())
    throw InsufficientHistory(
        fmt::format("target {} needs more than {} input steps", b.label(), input.size()));
  return target_series(b, input, first, input.size());
}

std::vector<BasisFunction> enumerate_basis(int max_total_degree, int max_delay, int max_factors) {
  std::vector<BasisFunction> out;
  if (max_total_degree < 1 || max_delay < 0 || max_factors < 1) return out;
  const int factors = std::min(max_factors, max_delay + 1);

  std::vector<int> delays;
  std::vector<int> degrees;
  // Choose delays in increasing order, then distribute degrees >= 1.
  std::function<void(std::size_t, int)> assign_degrees = [&](std::size_t idx, int budget) {
    if (idx == delays.size()) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < delays.size(); ++i) terms.push_back({delays[i], degrees[i]});
      out.emplace_back(std::move(terms));
      return;
    }
    const int remaining = static_cast<int>(delays.size() - idx - 1);
    for (int d = 1; d <= budget - remaining; ++d) {
      degrees[idx] = d;
      assign_degrees(idx + 1, budget - d);
    }
  };
  std::function<void(int)> choose_delays = [&](int next) {
    if (!delays.empty()) {
      degrees.assign(delays.size(), 0);
      assign_degrees(0, max_total_degree);
    }
    if (static_cast<int>(delays.size()) == factors) return;
    for (int tau = next; tau <= max_delay; ++tau) {
      delays.push_back(tau);
      choose_delays(tau + 1);
      delays.pop_back();
    }
  };
  choose_delays(0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ripc
