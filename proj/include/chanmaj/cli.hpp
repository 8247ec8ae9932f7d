// Copyright 2026 The chanmaj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chanmaj/classical.hpp"
#include "chanmaj/entropy.hpp"
#include "chanmaj/errors.hpp"
#include "chanmaj/games.hpp"
#include "chanmaj/io.hpp"
#include "chanmaj/majorization.hpp"
#include "chanmaj/quantum.hpp"

namespace chanmaj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitDomain = 2;

namespace detail {

struct Options {
  std::string n_path, m_path, channel_path, game_path, superchannel_path;
  std::string entropy = "shannon";
  std::string format = "json";
  Index kmax = 1;
  Index grid = 0;
  std::uint64_t rounds = 1000000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

inline void require_json(const Options& o, const std::string& cmd) {
  if (o.format != "json") throw DomainError("csv output is only available for 'entropy'; '" + cmd + "' writes JSON");
}

inline std::string csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

inline void majorize(const Options& o, std::ostream& out) {
  require_json(o, "majorize");
  ClassicalChannel n = io::channel_from_json(io::read_file(o.n_path));
  ClassicalChannel m = io::channel_from_json(io::read_file(o.m_path));
  const Index dim = std::max(n.output_dim(), m.output_dim());
  n = embed_output(n, dim);
  m = embed_output(m, dim);
  const auto cert = channel_majorizes(n, m);
  io::Json j{{"holds", cert.holds()}, {"certificate", io::to_json(cert)}};
  if (o.grid > 0) j["predictability_holds"] = operational_majorizes(n, m, o.grid);
  out << io::dump(j);
}

inline void standard_form_cmd(const Options& o, std::ostream& out) {
  require_json(o, "standard-form");
  out << io::dump(io::to_json(standard_form(io::channel_from_json(io::read_file(o.channel_path)))));
}

inline void upper_bound(const Options& o, std::ostream& out) {
  require_json(o, "upper-bound");
  const auto n = io::channel_from_json(io::read_file(o.channel_path));
  out << io::dump(io::Json{{"upper_bound", io::to_json(optimal_upper_bound(n.columns()))}});
}

inline void entropy(const Options& o, std::ostream& out) {
  const auto h = EntropyFunction::parse(o.entropy);
  const auto n = io::channel_from_json(io::read_file(o.channel_path));
  const auto bounds = channel_entropy_bounds(h, n);
  const auto reg = regularized_min_extension(h, n, o.kmax);
  if (o.format == "csv") {
    out << "k,regularized,lower,upper\n";
    for (std::size_t k = 0; k < reg.size(); ++k) {
      out << (k + 1) << ',' << csv_number(reg[k]) << ',' << csv_number(bounds.lower) << ','
          << csv_number(bounds.upper) << '\n';
    }
    return;
  }
  io::Json r = io::Json::array();
  for (double v : reg) r.push_back(io::number(v));
  out << io::dump(io::Json{{"lower", io::number(bounds.lower)}, {"upper", io::number(bounds.upper)}, {"regularized", r}});
}

inline void game(const Options& o, std::ostream& out) {
  require_json(o, "game");
  const auto n = io::channel_from_json(io::read_file(o.channel_path));
  const auto g = io::game_from_json(io::read_file(o.game_path));
  const double value = pr_t(n, g);
  io::Json strategy = io::Json::array();
  for (Index x : chanmaj::detail::best_inputs(chanmaj::detail::profiles(n), g)) strategy.push_back(x);
  out << io::dump(io::Json{{"pr_t", io::number(value)}, {"strategy", strategy}});
}

inline void simulate(const Options& o, std::ostream& out) {
  require_json(o, "simulate");
  const auto n = io::channel_from_json(io::read_file(o.channel_path));
  const auto g = io::game_from_json(io::read_file(o.game_path));
  const double estimate = simulate_game(n, g, o.rounds, o.seed, o.workers);
  out << io::dump(io::Json{{"estimate", io::number(estimate)},
                           {"exact", io::number(pr_t(n, g))},
                           {"rounds", o.rounds},
                           {"seed", o.seed}});
}

inline void qhmin(const Options& o, std::ostream& out) {
  require_json(o, "qhmin");
  const auto n = io::quantum_channel_from_json(io::read_file(o.channel_path));
  out << io::dump(io::Json{{"h_min", io::number(h_min_channel(n))}});
}

inline void verify_superchannel(const Options& o, std::ostream& out) {
  require_json(o, "verify-superchannel");
  const auto t = io::superchannel_from_json(io::read_file(o.superchannel_path));
  io::Json j{{"uniformity_preserving", is_uniformity_preserving(t)}, {"mixing", is_mixing_superchannel(t)}};
  if (!o.channel_path.empty()) {
    j["output"] = io::to_json(apply_superchannel(t, io::channel_from_json(io::read_file(o.channel_path))));
  }
  out << io::dump(j);
}

}  // namespace detail

/// Runs one subcommand; `args` excludes the program name. Returns 0 on
/// success, 2 for domain, precondition, resource and input errors, 1 for
/// solver and internal failures.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Channel majorization toolkit", "chanmaj"};
  app.require_subcommand(1, 1);
  auto format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* maj = app.add_subcommand("majorize", "Decide N > M with a certificate");
  maj->add_option("--n", o.n_path, "Channel N (JSON)")->required();
  maj->add_option("--m", o.m_path, "Channel M (JSON)")->required();
  maj->add_option("--grid", o.grid, "Also run the predictability test with step 1/grid");
  format(maj);

  auto* sf = app.add_subcommand("standard-form", "Canonical representative of a channel");
  sf->add_option("--channel", o.channel_path, "Channel (JSON)")->required();
  format(sf);

  auto* ub = app.add_subcommand("upper-bound", "Optimal upper bound of a channel's columns");
  ub->add_option("--channel", o.channel_path, "Channel (JSON)")->required();
  format(ub);

  auto* ent = app.add_subcommand("entropy", "Entropy extensions and regularized sequence");
  ent->add_option("--channel", o.channel_path, "Channel (JSON)")->required();
  ent->add_option("--entropy", o.entropy, "shannon | renyi:<alpha> | min");
  ent->add_option("--kmax", o.kmax, "Largest tensor power")->check(CLI::PositiveNumber);
  format(ent);

  auto* gm = app.add_subcommand("game", "Optimal t-game winning probability");
  gm->add_option("--channel", o.channel_path, "Channel (JSON)")->required();
  gm->add_option("--game", o.game_path, "Game (JSON)")->required();
  format(gm);

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo play of a t-game");
  sim->add_option("--channel", o.channel_path, "Channel (JSON)")->required();
  sim->add_option("--game", o.game_path, "Game (JSON)")->required();
  sim->add_option("--rounds", o.rounds, "Number of rounds")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "Random seed");
  sim->add_option("--workers", o.workers, "Number of shards")->check(CLI::PositiveNumber);
  format(sim);

  auto* qh = app.add_subcommand("qhmin", "Min-entropy of a quantum channel");
  qh->add_option("--channel", o.channel_path, "Quantum channel (JSON)")->required();
  format(qh);

  auto* vs = app.add_subcommand("verify-superchannel", "Check uniformity preservation and mixing");
  vs->add_option("--superchannel", o.superchannel_path, "Superchannel (JSON)")->required();
  vs->add_option("--channel", o.channel_path, "Channel to transform (JSON)");
  format(vs);

  std::vector<std::string> argv_storage{"chanmaj"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }

  try {
    if (maj->parsed()) detail::majorize(o, out);
    else if (sf->parsed()) detail::standard_form_cmd(o, out);
    else if (ub->parsed()) detail::upper_bound(o, out);
    else if (ent->parsed()) detail::entropy(o, out);
    else if (gm->parsed()) detail::game(o, out);
    else if (sim->parsed()) detail::simulate(o, out);
    else if (qh->parsed()) detail::qhmin(o, out);
    else if (vs->parsed()) detail::verify_superchannel(o, out);
    return kExitOk;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kExitDomain;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace chanmaj::cli
