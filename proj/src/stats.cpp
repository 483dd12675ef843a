#include "greyvar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "greyvar/errors.hpp"

namespace greyvar {

void RunningStats::push(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

SampleSummary summarize(std::span<const double> values, int batches) {
  if (batches < 2) throw DomainError("summarize: need at least two batches");
  SampleSummary out;
  RunningStats all;
  for (double v : values) all.push(v);
  out.n = all.count();
  out.mean = all.mean();
  out.variance = all.variance();
  out.se_mean = out.n > 0 ? std::sqrt(out.variance / static_cast<double>(out.n)) : 0.0;
  const auto n = static_cast<std::int64_t>(values.size());
  if (n < 2 * batches) return out;
  out.batches = batches;
  RunningStats spread;
  for (int k = 0; k < batches; ++k) {
    const std::int64_t lo = n * k / batches;
    const std::int64_t hi = n * (k + 1) / batches;
    RunningStats part;
    for (std::int64_t i = lo; i < hi; ++i) part.push(values[static_cast<std::size_t>(i)]);
    spread.push(part.variance());
  }
  out.se_variance = std::sqrt(spread.variance() / batches);
  return out;
}

std::vector<double> run_replicates(std::int64_t n, std::uint64_t seed, int workers,
                                   const std::function<double(std::int64_t, Rng&)>& replicate) {
  if (n < 0) throw DomainError("run_replicates: negative replicate count");
  std::vector<double> out(static_cast<std::size_t>(n));
  auto work = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      Rng rng = replicate_rng(seed, static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = replicate(i, rng);
    }
  };
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        work(n * w / workers, n * (w + 1) / workers);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

LineFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("loglog_fit: need at least two paired points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("loglog_fit: data must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) throw DomainError("loglog_fit: x values must differ");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = std::log(y[i]) - fit.intercept - fit.slope * std::log(x[i]);
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

}  // namespace greyvar
