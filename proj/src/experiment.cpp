#include "rlnc/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "rlnc/chain.hpp"
#include "rlnc/errors.hpp"
#include "rlnc/occupancy.hpp"
#include "rlnc/packetized.hpp"
#include "rlnc/reduction.hpp"
#include "rlnc/stats.hpp"

namespace rlnc {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

int thread_budget(std::size_t points) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("RLNC_THREADS")) {
    int parsed = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), parsed);
    if (ec == std::errc() && *ptr == '\0' && parsed >= 1) budget = parsed;
  }
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(budget), points));
}

// Monte Carlo throughput of the reduced engine; mirrors the full engine's
// warmup and batch-means treatment.
MeanCI reduced_monte_carlo(const ErasureNetwork& net, std::uint64_t total_epochs,
                           std::uint64_t seed) {
  const std::uint64_t warmup = default_warmup(net);
  if (total_epochs <= warmup)
    throw Error(ErrorKind::UsageError,
                "epoch budget must exceed the warmup of " + std::to_string(warmup));
  const std::uint64_t measured = total_epochs - warmup;
  ReducedEngine engine(net);
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < warmup; ++t)
    engine.step_epoch(sample_realization(net, rng));
  BatchAccumulator batches(measured);
  for (std::uint64_t t = 0; t < measured; ++t)
    batches.add(static_cast<double>(engine.step_epoch(sample_realization(net, rng))));
  return batches.mean_ci95();
}

SweepRow run_point(const ErasureNetwork& base, const ExperimentConfig& cfg,
                   int buffer, std::uint64_t seed, bool collect_timing) {
  SweepRow row;
  row.buffer_size = buffer;
  row.engine = cfg.engine;
  row.seed = (cfg.engine == EngineKind::Chain) ? 0 : seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ErasureNetwork net =
        buffer > 0 ? base.with_uniform_buffers(buffer) : base;
    switch (cfg.engine) {
      case EngineKind::Occupancy: {
        row.work = cfg.epochs;
        const ThroughputEstimate est =
            monte_carlo_throughput(net, cfg.epochs, seed);
        row.throughput = est.throughput;
        row.ci95 = est.ci95;
        break;
      }
      case EngineKind::Reduced: {
        row.work = cfg.epochs;
        const MeanCI est = reduced_monte_carlo(net, cfg.epochs, seed);
        row.throughput = est.mean;
        row.ci95 = est.half;
        break;
      }
      case EngineKind::Packetized: {
        row.work = cfg.block_size;
        if (cfg.replicas == 0)
          throw Error(ErrorKind::UsageError, "replicas must be positive");
        const gf::Field& field = gf::Field::of_width(cfg.field_width);
        std::vector<double> values;
        values.reserve(cfg.replicas);
        for (std::uint64_t r = 0; r < cfg.replicas; ++r)
          values.push_back(run_throughput(net, cfg.block_size,
                                          seed_for_point(seed, r), field)
                               .throughput);
        const MeanCI est = mean_ci95(values);
        row.throughput = est.mean;
        row.ci95 = est.half;
        break;
      }
      case EngineKind::Chain: {
        row.work = 0;
        const TransitionChain chain = build_chain(net);
        row.throughput = exact_throughput(chain, steady_state(chain));
        row.ci95 = 0.0;
        break;
      }
    }
  } catch (const Error& e) {
    row.status = to_string(e.kind());
    row.throughput = 0.0;
    row.ci95 = 0.0;
  }
  if (collect_timing) {
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
  }
  return row;
}

void format_double(std::ostringstream& out, double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  out.write(buf, ptr - buf);
  (void)ec;
}

}  // namespace

std::uint64_t seed_for_point(std::uint64_t base_seed, std::size_t index) {
  return splitmix(base_seed + 0x9e3779b97f4a7c15ull * (index + 1));
}

SweepResult run_sweep(const ErasureNetwork& net, const ExperimentConfig& cfg,
                      bool collect_timing) {
  if (!cfg.seed)
    throw Error(ErrorKind::UsageError,
                "a seed is required (set it in the config or with --seed)");
  std::vector<int> points = cfg.buffers;
  if (points.empty()) points.push_back(0);  // as declared

  SweepResult result;
  result.rows.assign(points.size(), SweepRow{});
  {
    std::ostringstream echo;
    echo << "engine=" << to_string(cfg.engine);
    echo << " buffers=";
    if (cfg.buffers.empty()) {
      echo << "declared";
    } else {
      for (std::size_t i = 0; i < cfg.buffers.size(); ++i)
        echo << (i ? "," : "") << cfg.buffers[i];
    }
    if (cfg.engine == EngineKind::Occupancy || cfg.engine == EngineKind::Reduced)
      echo << " epochs=" << cfg.epochs;
    if (cfg.engine == EngineKind::Packetized)
      echo << " block_size=" << cfg.block_size << " replicas=" << cfg.replicas
           << " field_width=" << cfg.field_width;
    echo << " seed=" << *cfg.seed;
    result.config_echo = echo.str();
  }

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= points.size()) return;
      result.rows[idx] = run_point(net, cfg, points[idx],
                                   seed_for_point(*cfg.seed, idx),
                                   collect_timing);
    }
  };
  const int threads = thread_budget(points.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# rlncsim sweep " << result.config_echo << "\n";
  out << "buffer,engine,work,throughput,ci95,seed,wall_ms,status\n";
  for (const SweepRow& row : result.rows) {
    out << row.buffer_size << ',' << to_string(row.engine) << ',' << row.work
        << ',';
    format_double(out, row.throughput);
    out << ',';
    format_double(out, row.ci95);
    out << ',' << row.seed << ',' << row.wall_ms << ',' << row.status << "\n";
  }
  return out.str();
}

CompareOutcome compare_sweeps(const SweepResult& a, const SweepResult& b,
                              double tolerance) {
  if (a.rows.size() != b.rows.size())
    throw Error(ErrorKind::MismatchedSweep,
                "sweeps have different point counts");
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].buffer_size != b.rows[i].buffer_size)
      throw Error(ErrorKind::MismatchedSweep,
                  "sweeps cover different buffer points");
  CompareOutcome out;
  out.pass = true;
  std::ostringstream report;
  report << "point comparison (tolerance " << tolerance
         << " relative, or overlapping 95% intervals)\n";
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const SweepRow& ra = a.rows[i];
    const SweepRow& rb = b.rows[i];
    report << "buffer=" << (ra.buffer_size > 0
                                ? std::to_string(ra.buffer_size)
                                : std::string("declared"))
           << " " << to_string(ra.engine) << "=";
    format_double(report, ra.throughput);
    report << " " << to_string(rb.engine) << "=";
    format_double(report, rb.throughput);
    bool ok = ra.status == "ok" && rb.status == "ok";
    if (!ok) {
      report << " FAIL (status " << ra.status << "/" << rb.status << ")\n";
      out.pass = false;
      continue;
    }
    const double gap = std::abs(ra.throughput - rb.throughput);
    const double scale = std::max(std::abs(ra.throughput), std::abs(rb.throughput));
    const bool within_tol = gap <= tolerance * scale;
    const bool ci_overlap = gap <= ra.ci95 + rb.ci95;
    ok = within_tol || ci_overlap;
    report << " gap=";
    format_double(report, gap);
    report << (ok ? " ok" : " FAIL") << "\n";
    if (!ok) out.pass = false;
  }
  out.report = report.str();
  return out;
}

}  // namespace rlnc
