#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rlnc/chain.hpp"
#include "rlnc/config.hpp"
#include "rlnc/errors.hpp"
#include "rlnc/experiment.hpp"
#include "rlnc/netmodel.hpp"
#include "rlnc/occupancy.hpp"
#include "rlnc/reduction.hpp"

namespace {

std::string mask_names(const rlnc::ErasureNetwork& net, std::uint32_t mask) {
  std::string out = "{";
  for (int i = 1; i <= net.relay_count(); ++i) {
    if (!(mask >> (i - 1) & 1)) continue;
    if (out.size() > 1) out += ",";
    out += net.node_name(i);
  }
  return out + "}";
}

rlnc::ErasureNetwork with_buffer(const rlnc::ErasureNetwork& net, int buffer) {
  return buffer > 0 ? net.with_uniform_buffers(buffer) : net;
}

int do_validate(const std::string& path) {
  const rlnc::ParsedConfig parsed = rlnc::parse_config(path);
  const rlnc::ErasureNetwork& net = parsed.network;
  std::cout << "nodes: " << net.node_count() << " (" << net.relay_count()
            << " relays), edges: " << net.edges().size() << "\n";
  std::cout << "buffers:";
  for (int i = 1; i <= net.relay_count(); ++i)
    std::cout << " " << net.node_name(i) << "=" << net.buffer_size(i);
  std::cout << "\n";
  const rlnc::MinCut cut = rlnc::min_cut_capacity(net);
  std::cout << "min-cut capacity: " << cut.value;
  if (cut.exact) std::cout << " (" << cut.exact->to_string() << ")";
  std::cout << "\ncanonical form:\n" << rlnc::serialize_config(net);
  return 0;
}

int do_mincut(const std::string& path) {
  const rlnc::ParsedConfig parsed = rlnc::parse_config(path);
  const rlnc::MinCut cut = rlnc::min_cut_capacity(parsed.network);
  std::cout << cut.value;
  if (cut.exact) std::cout << " (" << cut.exact->to_string() << ")";
  std::cout << "\n";
  return 0;
}

int emit_csv(const rlnc::SweepResult& result, const std::string& out_path) {
  const std::string csv = rlnc::sweep_to_csv(result);
  if (out_path.empty()) {
    std::cout << csv;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw rlnc::Error(rlnc::ErrorKind::UsageError,
                      "cannot open output file " + out_path);
  out << csv;
  std::cerr << "wrote " << out_path << " (" << result.rows.size()
            << " points)\n";
  return 0;
}

int do_census(const std::string& path, int buffer, std::uint64_t epochs,
              std::uint64_t seed) {
  const rlnc::ParsedConfig parsed = rlnc::parse_config(path);
  const rlnc::ErasureNetwork net = with_buffer(parsed.network, buffer);
  const rlnc::CensusResult census = rlnc::state_census(net, epochs, seed);
  std::cout << "distinct states visited: " << census.distinct_states << "\n"
            << "transient states (warmup only): " << census.transient_states << "\n"
            << "measured epochs: " << census.epochs_measured << " (after "
            << census.warmup << " warmup)\n"
            << "crude state-count bound: " << census.crude_bound << "\n";
  return 0;
}

int do_classify(const std::string& path) {
  const rlnc::ParsedConfig parsed = rlnc::parse_config(path);
  const rlnc::ErasureNetwork& net = parsed.network;
  const rlnc::LayerPartition lp = rlnc::layered_partition(net);
  for (std::size_t k = 1; k < lp.layers.size(); ++k) {
    std::cout << "layer " << k << " (distance " << k << " to "
              << net.node_name(net.dest()) << "):";
    for (int v : lp.layers[k]) std::cout << " " << net.node_name(v);
    std::cout << "\n";
  }
  const bool layered = rlnc::is_layered(net);
  std::cout << "layered: " << (layered ? "yes" : "no") << "\n";
  const auto family = rlnc::tracked_family(net);
  std::cout << "tracked family size: " << family.size() << " of "
            << (1u << net.relay_count()) << " subsets\n";
  if (layered) {
    const rlnc::ClosureCheck check = rlnc::static_closure_check(net);
    if (check.closed) {
      std::cout << "statically closed: yes (the reduced engine can never "
                   "demand an untracked entry)\n";
    } else {
      std::cout << "statically closed: no — updating "
                << mask_names(net, check.target) << " across edge "
                << net.node_name(net.edges()[static_cast<std::size_t>(check.edge)].tail)
                << "->"
                << net.node_name(net.edges()[static_cast<std::size_t>(check.edge)].head)
                << " may demand untracked " << mask_names(net, check.demanded)
                << "\n";
    }
  }
  return 0;
}

int do_chain(const std::string& path, int buffer) {
  const rlnc::ParsedConfig parsed = rlnc::parse_config(path);
  const rlnc::ErasureNetwork net = with_buffer(parsed.network, buffer);
  const rlnc::TransitionChain chain = rlnc::build_chain(net);
  const auto recurrent = rlnc::recurrent_class(chain);
  const std::vector<double> pi = rlnc::steady_state(chain);
  const double throughput = rlnc::exact_throughput(chain, pi);
  const rlnc::MinCut cut = rlnc::min_cut_capacity(net);
  std::cout << "reachable states: " << chain.states.size() << "\n"
            << "recurrent states: " << recurrent.size() << "\n"
            << "exact throughput: " << throughput << "\n"
            << "min-cut capacity: " << cut.value << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rlncsim: simulate and exactly analyze randomized linear packet mixing "
      "over lossy relay networks with finite buffers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string engine_name;
  std::vector<std::string> engine_pair;
  std::vector<int> buffers;
  int buffer_single = 0;
  std::uint64_t epochs = 0;
  std::uint64_t block_size = 0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  double tolerance = 0.02;
  bool timing = false;
  int field_width = 16;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "network config file (JSON)")
        ->required();
  };
  auto add_sweep_options = [&](CLI::App* cmd) {
    cmd->add_option("--buffers", buffers,
                    "uniform buffer sizes to sweep (comma separated)")
        ->delimiter(',');
    cmd->add_option("--epochs", epochs,
                    "Monte Carlo epochs per point, warmup included");
    cmd->add_option("--block-size", block_size, "packetized block length");
    cmd->add_option("--replicas", replicas, "packetized replicas per point");
    cmd->add_option("--seed", seed, "base seed (no wall-clock seeding)");
    cmd->add_option("--out", out_path, "CSV output path (default stdout)");
    cmd->add_flag("--timing", timing,
                  "record wall-clock ms per point (off keeps CSVs "
                  "byte-reproducible)");
    cmd->add_option("--field-width", field_width,
                    "field width in bits for the packetized engine (8 or 16)")
        ->check(CLI::IsMember({8, 16}));
  };

  CLI::App* validate =
      app.add_subcommand("validate", "check a config and print its canonical form");
  add_config(validate);

  CLI::App* mincut =
      app.add_subcommand("mincut", "max-flow capacity with edge capacity 1 - erasure");
  add_config(mincut);

  CLI::App* sweep =
      app.add_subcommand("sweep", "run one engine over a buffer sweep, emit CSV");
  add_config(sweep);
  sweep->add_option("--engine", engine_name,
                    "packetized | occupancy | chain | reduced");
  add_sweep_options(sweep);

  CLI::App* compare = app.add_subcommand(
      "compare", "run two engines over the same sweep and compare throughput");
  add_config(compare);
  compare
      ->add_option("--engines", engine_pair,
                   "exactly two of packetized|occupancy|chain|reduced")
      ->delimiter(',')
      ->expected(2)
      ->required();
  compare->add_option("--tolerance", tolerance,
                      "relative agreement tolerance (default 0.02)");
  add_sweep_options(compare);

  CLI::App* census = app.add_subcommand(
      "census", "count distinct occupancy states visited after warmup");
  add_config(census);
  census->add_option("--buffer", buffer_single, "uniform buffer override");
  census->add_option("--epochs", epochs, "total epochs, warmup included")
      ->required();
  census->add_option("--seed", seed, "seed")->required();

  CLI::App* classify = app.add_subcommand(
      "classify", "layer structure, tracked family size, closure check");
  add_config(classify);

  CLI::App* chain = app.add_subcommand(
      "chain", "exact reachable-state chain analysis (small networks)");
  add_config(chain);
  chain->add_option("--buffer", buffer_single, "uniform buffer override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (validate->parsed()) return do_validate(config_path);
    if (mincut->parsed()) return do_mincut(config_path);
    if (census->parsed())
      return do_census(config_path, buffer_single, epochs, seed);
    if (classify->parsed()) return do_classify(config_path);
    if (chain->parsed()) return do_chain(config_path, buffer_single);

    // sweep and compare share config resolution: file experiment block
    // first, explicit flags override.
    const rlnc::ParsedConfig parsed = rlnc::parse_config(config_path);
    rlnc::ExperimentConfig cfg =
        parsed.experiment.value_or(rlnc::ExperimentConfig{});
    CLI::App* active = sweep->parsed() ? sweep : compare;
    if (active->count("--buffers")) cfg.buffers = buffers;
    if (active->count("--epochs")) cfg.epochs = epochs;
    if (active->count("--block-size")) cfg.block_size = block_size;
    if (active->count("--replicas")) cfg.replicas = replicas;
    if (active->count("--field-width")) cfg.field_width = field_width;
    if (active->count("--seed")) cfg.seed = seed;
    if (active->count("--out")) cfg.out = out_path;

    if (sweep->parsed()) {
      if (!engine_name.empty()) cfg.engine = rlnc::engine_from_string(engine_name);
      const rlnc::SweepResult result =
          rlnc::run_sweep(parsed.network, cfg, timing);
      return emit_csv(result, cfg.out);
    }

    // compare
    cfg.engine = rlnc::engine_from_string(engine_pair[0]);
    const rlnc::SweepResult first =
        rlnc::run_sweep(parsed.network, cfg, timing);
    cfg.engine = rlnc::engine_from_string(engine_pair[1]);
    const rlnc::SweepResult second =
        rlnc::run_sweep(parsed.network, cfg, timing);
    const rlnc::CompareOutcome outcome =
        rlnc::compare_sweeps(first, second, tolerance);
    std::cout << outcome.report;
    if (!cfg.out.empty()) {
      std::ofstream out(cfg.out, std::ios::binary);
      out << outcome.report;
    }
    std::cout << (outcome.pass ? "AGREE" : "DISAGREE") << "\n";
    return outcome.pass ? 0 : 3;
  } catch (const rlnc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == rlnc::ErrorKind::UsageError ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
