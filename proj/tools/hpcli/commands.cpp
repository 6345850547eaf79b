#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>

#include "csv.hpp"
#include "hprec/hprec.hpp"
#include "hprec/parallel.hpp"
#include "hprec/random.hpp"

namespace hpcli {

using namespace hprec;

namespace {

constexpr std::uint64_t kEvalStream = 0xe7a1;

// ---------------------------------------------------------------------------
// Setting helpers

int as_int(const Settings& s, const std::string& key, long long lo, long long hi = 1LL << 40) {
  const long long v = s.integer(key);
  if (v < lo || v > hi) throw ConfigError("'" + key + "' out of range: " + std::to_string(v));
  return static_cast<int>(v);
}

double as_real(const Settings& s, const std::string& key, double lo) {
  const double v = s.real(key);
  if (!std::isfinite(v) || v < lo) throw ConfigError("'" + key + "' must be finite and >= " + format_real(lo));
  return v;
}

std::uint64_t seed_of(const Settings& s) { return static_cast<std::uint64_t>(as_int(s, "seed", 0)); }

AnalogConstraint constraint_of(const Settings& s) {
  const auto v = s.text("constraint");
  if (v == "unconstrained") return AnalogConstraint::Unconstrained;
  if (v == "phase-shifter") return AnalogConstraint::PhaseShifter;
  throw ConfigError("constraint must be 'unconstrained' or 'phase-shifter', got '" + v + "'");
}

RadiusMode radius_of(const Settings& s) {
  const auto v = s.text("radius_mode");
  if (v == "frobenius") return RadiusMode::Frobenius;
  if (v == "entrywise") return RadiusMode::EntrywiseScaled;
  throw ConfigError("radius-mode must be 'frobenius' or 'entrywise', got '" + v + "'");
}

std::string required_path(const Settings& s, const std::string& key) {
  auto v = s.text(key);
  if (v.empty()) throw ConfigError("missing required setting '" + key + "'");
  return v;
}

void add_common(Settings& st, long long default_seed = 0) {
  st.add_int("seed", default_seed, "Seed for all randomized stages (HPCLI_SEED overrides the config file)");
  st.add_int("threads", 1, "Worker threads for per-channel evaluation");
}

void add_dataset(Settings& st) {
  st.add_text("dataset", "", "Channel dataset file (HPCH format)");
  st.add_int("l", 0, "RF chains L (the file stores none; 0 means L = M)");
  st.add_int("split", 0, "First `split` realizations are training data; the rest are test data (0: use all)");
}

void add_optimizer(Settings& st) {
  st.add_text("constraint", "unconstrained", "Analog constraint: unconstrained | phase-shifter");
  st.add_text("radius_mode", "frobenius", "Error-ball radius: frobenius (eps) | entrywise (eps*N*M)");
}

ChannelDataset load_working(const Settings& s) {
  ChannelDataset ds = load_dataset(required_path(s, "dataset"));
  const int l = as_int(s, "l", 0);
  if (l > 0) ds = with_rf_chains(std::move(ds), l);
  return ds;
}

ChannelDataset normalized(ChannelDataset ds) { return ds.normalized() ? std::move(ds) : normalize(ds); }

std::pair<ChannelDataset, ChannelDataset> train_test(const ChannelDataset& ds, const Settings& s) {
  const int split_at = as_int(s, "split", 0);
  if (split_at == 0) return {ds, ds};
  return split(ds, split_at);
}

// Per-channel results computed concurrently, in channel order.
template <class Fn>
auto per_channel(const ChannelDataset& ds, int threads, Fn&& fn) {
  using R = decltype(fn(ds.realizations.front()));
  std::vector<R> out(ds.size());
  parallel_map(ds.size(), threads, [&](std::size_t i) {
    out[i] = fn(ds.realizations[i]);
    return 0.0;
  });
  return out;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Column-wise mean of equal-length rows.
std::vector<double> mean_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> acc(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += r[i];
  }
  for (double& a : acc) a /= static_cast<double>(rows.size());
  return acc;
}

ErrorSet error_set_for(const SystemDims& dims, double epsilon, int n_e, std::uint64_t seed) {
  if (epsilon > 0.0) return sample_error_set(dims, epsilon, n_e, seed);
  return ErrorSet{dims, 0.0,
                  {std::vector<CMatrix>(static_cast<std::size_t>(dims.bands), CMatrix::Zero(dims.users, dims.antennas))}};
}

std::optional<ScheduleDocument> schedule_if_given(const Settings& s) {
  const auto path = s.text("schedule");
  if (path.empty()) return std::nullopt;
  return load_schedule(path);
}

PcmpSchedule fixed_pcmp(int iterations, int inner, int bands, double step, double error_step) {
  PcmpSchedule sched(iterations, inner, bands, step);
  for (int k = 0; k < iterations; ++k) {
    for (int i = 0; i < inner; ++i) {
      for (int b = 0; b < bands; ++b) sched.at(k, i, 1 + bands + b) = error_step;
    }
  }
  return sched;
}

std::string learned_name(int k) { return "learned-K" + std::to_string(k); }
std::string fixed_name(int k) { return "fixed-step-" + std::to_string(k); }

// ---------------------------------------------------------------------------
// gen

Command make_gen(CLI::App& app) {
  Command c;
  c.app = app.add_subcommand("gen", "Generate a Rayleigh channel dataset (raw, not normalized)");
  c.settings = std::make_unique<Settings>(c.app);
  auto& st = *c.settings;
  add_common(st, 1);
  st.add_int("b", 8, "Bands B");
  st.add_int("n", 6, "Users N");
  st.add_int("l", 10, "RF chains L (validated only; the file format does not store it)");
  st.add_int("m", 12, "Antennas M");
  st.add_real("noise_var", 1.0, "Noise variance sigma^2 (linear)");
  st.add_int("count", 1100, "Number of realizations R");
  st.add_text("out", "", "Output dataset path");
  c.run = [](const Settings& s) {
    const SystemDims dims{as_int(s, "b", 1), as_int(s, "n", 1), as_int(s, "l", 1), as_int(s, "m", 1),
                          as_real(s, "noise_var", 0.0)};
    try {
      dims.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    const int count = as_int(s, "count", 1);
    const auto out = required_path(s, "out");
    const auto ds = gen_rayleigh(dims, count, seed_of(s));
    save_dataset(ds, out);
    std::cout << "gen: R=" << ds.size() << " B=" << dims.bands << " N=" << dims.users << " M=" << dims.antennas
              << " seed=" << ds.seed << " -> " << out << "\n";
  };
  return c;
}

// ---------------------------------------------------------------------------
// train

Command make_train(CLI::App& app) {
  Command c;
  c.app = app.add_subcommand("train", "Learn a step-size schedule (pga | pcmp | admm)");
  c.settings = std::make_unique<Settings>(c.app);
  auto& st = *c.settings;
  add_common(st);
  add_dataset(st);
  add_optimizer(st);
  st.add_text("kind", "pga", "Schedule kind: pga | pcmp | admm");
  st.add_int("k", 5, "Unrolled iterations K (I_max for admm)");
  st.add_int("i_max", 2, "PCMP inner iterations");
  st.add_real("init_step", 0.05, "Initial constant step size for every entry");
  st.add_real("init_error_step", -1.0, "Initial PCMP error step (negative: same as init-step)");
  st.add_text("init_schedule", "", "Start from this schedule file instead of constant steps");
  st.add_int("epochs", 50, "Training epochs");
  st.add_int("batch_size", 100, "Batch size (capped at the training-set size)");
  st.add_real("learning_rate", 1e-2, "Learning rate eta");
  st.add_text("optimizer", "adam", "adam | sgd");
  st.add_real("fd_step", 1e-4, "Finite-difference probe width");
  st.add_real("epsilon", 0.05, "PCMP error bound");
  st.add_int("n_e", 20, "PCMP error patterns per loss evaluation");
  st.add_real("lambda", 1.0, "ADMM initial lambda");
  st.add_real("mu", 1.0, "ADMM initial mu");
  st.add_real("mu_a", 0.05, "ADMM initial analog step");
  st.add_real("mu_d", 0.05, "ADMM initial digital step");
  st.add_real("mu_y", 1e-4, "ADMM initial multiplier step");
  st.add_text("multiplier", "descent", "ADMM multiplier update: descent | ascent");
  st.add_text("out", "schedule.json", "Trained schedule output (JSON)");
  st.add_text("loss_csv", "train_loss.csv", "Epoch-loss CSV output");
  c.run = [](const Settings& s) {
    const auto all = normalized(load_working(s));
    const auto train = train_test(all, s).first;

    TrainConfig cfg;
    cfg.epochs = as_int(s, "epochs", 0);
    const int batch = as_int(s, "batch_size", 1);
    cfg.batch_size = s.given("batch_size") ? batch : std::min<int>(batch, static_cast<int>(train.size()));
    cfg.learning_rate = as_real(s, "learning_rate", 0.0);
    cfg.iterations = as_int(s, "k", 0);
    cfg.seed = seed_of(s);
    const auto opt = s.text("optimizer");
    if (opt != "adam" && opt != "sgd") throw ConfigError("optimizer must be 'adam' or 'sgd'");
    cfg.optimizer = opt == "adam" ? OptimizerKind::Adam : OptimizerKind::PlainSgd;
    cfg.fd_step = as_real(s, "fd_step", 0.0);
    cfg.threads = as_int(s, "threads", 1, 1024);
    try {
      cfg.validate(train.size());
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }

    const auto kind = s.text("kind");
    const double step = as_real(s, "init_step", 0.0);
    std::optional<ScheduleDocument> init_doc;
    if (!s.text("init_schedule").empty()) init_doc = load_schedule(s.text("init_schedule"));
    auto init_as = [&]<class S>(ScheduleKind want) -> std::optional<S> {
      if (!init_doc) return std::nullopt;
      if (init_doc->kind() != want) throw ConfigError("init-schedule kind does not match --kind");
      return std::get<S>(init_doc->schedule);
    };

    ScheduleDocument doc;
    doc.seed = cfg.seed;
    doc.config = cfg;
    std::vector<double> losses;
    const int bands = train.dims.bands;
    if (kind == "pga") {
      const auto init = init_as.operator()<PgaSchedule>(ScheduleKind::Pga).value_or(PgaSchedule(cfg.iterations, bands, step));
      auto r = train_pga(train, cfg, constraint_of(s), init);
      doc.schedule = std::move(r.schedule);
      losses = std::move(r.epoch_losses);
    } else if (kind == "pcmp") {
      const double es = s.real("init_error_step") < 0.0 ? step : as_real(s, "init_error_step", 0.0);
      const auto init = init_as.operator()<PcmpSchedule>(ScheduleKind::Pcmp)
                            .value_or(fixed_pcmp(cfg.iterations, as_int(s, "i_max", 1), bands, step, es));
      const double eps = as_real(s, "epsilon", 0.0);
      auto r = train_pcmp(train, cfg, eps, as_int(s, "n_e", 0), constraint_of(s), init,
                          PcmpOptions{radius_of(s), InnerUpdate::Alternating});
      doc.schedule = std::move(r.schedule);
      doc.epsilon = eps;
      losses = std::move(r.epoch_losses);
    } else if (kind == "admm") {
      const auto init = init_as.operator()<AdmmParams>(ScheduleKind::Admm)
                            .value_or(AdmmParams(cfg.iterations, as_real(s, "lambda", 0.0), as_real(s, "mu", 0.0),
                                                 as_real(s, "mu_a", 0.0), as_real(s, "mu_d", 0.0),
                                                 as_real(s, "mu_y", 0.0)));
      const auto mode = s.text("multiplier");
      if (mode != "descent" && mode != "ascent") throw ConfigError("multiplier must be 'descent' or 'ascent'");
      auto r = train_admm(train, cfg, init, mode == "ascent" ? MultiplierMode::Ascent : MultiplierMode::Descent);
      doc.schedule = std::move(r.schedule);
      losses = std::move(r.epoch_losses);
    } else {
      throw ConfigError("kind must be 'pga', 'pcmp' or 'admm', got '" + kind + "'");
    }

    save_schedule(doc, s.text("out"));
    CsvWriter csv(s.text("loss_csv"), {"epoch", "mean_loss"});
    for (std::size_t e = 0; e < losses.size(); ++e) csv.row({static_cast<long long>(e + 1), losses[e]});
    csv.close();
    std::cout << "train: kind=" << kind << " epochs=" << losses.size() << " channels=" << train.size();
    if (!losses.empty()) std::cout << " loss " << format_real(losses.front()) << " -> " << format_real(losses.back());
    std::cout << " -> " << s.text("out") << "\n";
  };
  return c;
}

// ---------------------------------------------------------------------------
// convergence

Command make_convergence(CLI::App& app) {
  Command c;
  c.app = app.add_subcommand("convergence", "Mean rate per iteration on the test channels, learned vs fixed step");
  c.settings = std::make_unique<Settings>(c.app);
  auto& st = *c.settings;
  add_common(st);
  add_dataset(st);
  add_optimizer(st);
  st.add_text("schedule", "", "Learned schedule (pga or pcmp); omitted: fixed-step curve only");
  st.add_real("fixed_step", 0.05, "Constant step of the fixed-step reference");
  st.add_real("fixed_error_step", -1.0, "PCMP reference error step (negative: same as fixed-step)");
  st.add_int("fixed_iterations", 100, "Iterations of the fixed-step reference");
  st.add_int("i_max", 2, "Inner iterations of the fixed-step PCMP reference");
  st.add_real("epsilon", -1.0, "PCMP error bound (negative: from the schedule file)");
  st.add_int("n_e", 20, "Error patterns in the evaluation set");
  st.add_text("out", "convergence.csv", "CSV output");
  c.run = [](const Settings& s) {
    const auto test = train_test(normalized(load_working(s)), s).second;
    const auto doc = schedule_if_given(s);
    const int threads = as_int(s, "threads", 1, 1024);
    const auto cons = constraint_of(s);
    const std::uint64_t seed = seed_of(s);
    const int fixed_k = as_int(s, "fixed_iterations", 0);
    const double fixed_step = as_real(s, "fixed_step", 0.0);
    const int bands = test.dims.bands;
    const bool robust = doc && doc->kind() == ScheduleKind::Pcmp;
    if (doc && doc->kind() == ScheduleKind::Admm) throw ConfigError("use admm-run for ADMM schedules");

    const auto out = s.text("out");
    if (!robust) {
      CsvWriter csv(out, {"iteration", "method", "mean_rate"});
      auto emit = [&](const std::string& name, const PgaSchedule& sched) {
        const auto rows = per_channel(test, threads, [&](const ChannelSet& ch) { return pga_run(ch, sched, cons, seed).rates(); });
        const auto m = mean_rows(rows);
        for (std::size_t k = 0; k < m.size(); ++k) csv.row({static_cast<long long>(k), name, m[k]});
        return m.back();
      };
      double learned = 0.0;
      if (doc) {
        const auto& sched = std::get<PgaSchedule>(doc->schedule);
        learned = emit(learned_name(sched.iterations()), sched);
      }
      const double fixed = emit(fixed_name(fixed_k), PgaSchedule(fixed_k, bands, fixed_step));
      csv.close();
      std::cout << "convergence: channels=" << test.size() << " " << fixed_name(fixed_k) << "=" << format_real(fixed);
      if (doc) std::cout << " learned=" << format_real(learned) << " ratio=" << format_real(learned / fixed);
      std::cout << " -> " << out << "\n";
      return;
    }

    const auto& learned_sched = std::get<PcmpSchedule>(doc->schedule);
    const double eps = s.real("epsilon") >= 0.0 ? s.real("epsilon") : doc->epsilon.value_or(0.0);
    const auto es = error_set_for(test.dims, eps, as_int(s, "n_e", 0), derive_seed(seed, {kEvalStream}));
    const PcmpOptions opts{radius_of(s), InnerUpdate::Alternating};
    const double fes = s.real("fixed_error_step") < 0.0 ? fixed_step : as_real(s, "fixed_error_step", 0.0);
    CsvWriter csv(out, {"iteration", "method", "mean_rate", "min_rate"});
    auto emit = [&](const std::string& name, const PcmpSchedule& sched) {
      const auto rows = per_channel(test, threads, [&](const ChannelSet& ch) {
        const auto traj = pcmp_run(ch, sched, eps, cons, seed, opts);
        std::vector<double> r;
        for (const auto& it : traj.iterates) {
          r.push_back(it.rate);
          r.push_back(min_rate_over_errors(it.precoders, ch, es));
        }
        return r;
      });
      const auto m = mean_rows(rows);
      for (std::size_t k = 0; k < m.size() / 2; ++k) csv.row({static_cast<long long>(k), name, m[2 * k], m[2 * k + 1]});
    };
    emit(learned_name(learned_sched.iterations()), learned_sched);
    emit(fixed_name(fixed_k), fixed_pcmp(fixed_k, as_int(s, "i_max", 1), bands, fixed_step, fes));
    csv.close();
    std::cout << "convergence: robust, epsilon=" << format_real(eps) << " channels=" << test.size() << " -> " << out
              << "\n";
  };
  return c;
}

// ---------------------------------------------------------------------------
// sweep-snr

Command make_sweep(CLI::App& app) {
  Command c;
  c.app = app.add_subcommand(
      "sweep-snr",
      "Mean final rate versus SNR. Convention: unit transmit power, sigma^2 = 10^(-SNR_dB/10); raw dataset required");
  c.settings = std::make_unique<Settings>(c.app);
  auto& st = *c.settings;
  add_common(st);
  add_dataset(st);
  add_optimizer(st);
  st.add_text("schedule", "", "Learned PGA schedule (optional)");
  st.add_real("fixed_step", 0.05, "Constant step of the fixed-step reference");
  st.add_int("fixed_iterations", 100, "Iterations of the fixed-step reference");
  st.add_int("baseline_iterations", 500, "Iterations of the fully digital baseline");
  st.add_real("baseline_step", 0.05, "Step of the fully digital baseline");
  st.add_reals("snr_db", {-10, -5, 0, 5, 10, 15, 20}, "SNR grid in dB (comma separated)");
  st.add_text("out", "sweep_snr.csv", "CSV output");
  c.run = [](const Settings& s) {
    const auto raw = train_test(load_working(s), s).second;
    if (raw.normalized()) throw ConfigError("sweep-snr needs a raw (unnormalized) dataset");
    const auto doc = schedule_if_given(s);
    if (doc && doc->kind() != ScheduleKind::Pga) throw ConfigError("sweep-snr takes a pga schedule");
    const int threads = as_int(s, "threads", 1, 1024);
    const auto cons = constraint_of(s);
    const std::uint64_t seed = seed_of(s);
    const int fixed_k = as_int(s, "fixed_iterations", 0);
    const PgaSchedule fixed(fixed_k, raw.dims.bands, as_real(s, "fixed_step", 0.0));
    const int base_k = as_int(s, "baseline_iterations", 0);
    const double base_step = as_real(s, "baseline_step", 0.0);

    CsvWriter csv(s.text("out"), {"snr_db", "method", "mean_rate"});
    for (double snr : s.reals("snr_db")) {
      if (!std::isfinite(snr)) throw ConfigError("SNR values must be finite");
      const auto ds = normalize(with_noise_var(raw, std::pow(10.0, -snr / 10.0)));
      if (doc) {
        const auto& sched = std::get<PgaSchedule>(doc->schedule);
        const auto r = per_channel(ds, threads, [&](const ChannelSet& ch) { return pga_run(ch, sched, cons, seed).final().rate; });
        csv.row({snr, learned_name(sched.iterations()), mean(r)});
      }
      const auto rf = per_channel(ds, threads, [&](const ChannelSet& ch) { return pga_run(ch, fixed, cons, seed).final().rate; });
      csv.row({snr, fixed_name(fixed_k), mean(rf)});
      const auto rb = per_channel(ds, threads, [&](const ChannelSet& ch) { return fully_digital_baseline(ch, base_k, base_step); });
      csv.row({snr, std::string("fully-digital"), mean(rb)});
    }
    csv.close();
    std::cout << "sweep-snr: points=" << s.reals("snr_db").size() << " channels=" << raw.size() << " -> "
              << s.text("out") << "\n";
  };
  return c;
}

// ---------------------------------------------------------------------------
// eval-robust

Command make_eval_robust(CLI::App& app) {
  Command c;
  c.app = app.add_subcommand("eval-robust", "Mean minimal rate over the error set for each epsilon");
  c.settings = std::make_unique<Settings>(c.app);
  auto& st = *c.settings;
  add_common(st);
  add_dataset(st);
  add_optimizer(st);
  st.add_text("schedule", "", "Learned PCMP schedule (optional)");
  st.add_real("fixed_step", 0.05, "Constant step of the fixed-step PCMP reference");
  st.add_real("fixed_error_step", -1.0, "Error step of the reference (negative: same as fixed-step)");
  st.add_int("fixed_iterations", 100, "Iterations of the fixed-step reference");
  st.add_int("i_max", 2, "Inner iterations of the fixed-step reference");
  st.add_reals("epsilons", {0.005, 0.05, 0.5}, "Error bounds (comma separated)");
  st.add_real("design_epsilon", -1.0,
              "Optimizer error bound (negative: re-optimize at each evaluated epsilon)");
  st.add_int("n_e", 20, "Random error patterns per set (the zero pattern is added)");
  st.add_text("out", "eval_robust.csv", "CSV output");
  c.run = [](const Settings& s) {
    const auto test = train_test(normalized(load_working(s)), s).second;
    const auto doc = schedule_if_given(s);
    if (doc && doc->kind() != ScheduleKind::Pcmp) throw ConfigError("eval-robust takes a pcmp schedule");
    const int threads = as_int(s, "threads", 1, 1024);
    const auto cons = constraint_of(s);
    const std::uint64_t seed = seed_of(s);
    const int fixed_k = as_int(s, "fixed_iterations", 0);
    const double fixed_step = as_real(s, "fixed_step", 0.0);
    const double fes = s.real("fixed_error_step") < 0.0 ? fixed_step : as_real(s, "fixed_error_step", 0.0);
    const auto fixed = fixed_pcmp(fixed_k, as_int(s, "i_max", 1), test.dims.bands, fixed_step, fes);
    const PcmpOptions opts{radius_of(s), InnerUpdate::Alternating};
    const int n_e = as_int(s, "n_e", 0);
    const double design = s.real("design_epsilon");

    CsvWriter csv(s.text("out"), {"epsilon", "method", "mean_min_rate"});
    for (double eps : s.reals("epsilons")) {
      if (!std::isfinite(eps) || eps < 0.0) throw ConfigError("epsilon values must be finite and >= 0");
      // One seed for every epsilon: the patterns keep their directions and scale with the bound.
      const auto es = error_set_for(test.dims, eps, n_e, derive_seed(seed, {kEvalStream}));
      auto eval = [&](const std::string& name, const PcmpSchedule& sched) {
        const auto r = per_channel(test, threads, [&](const ChannelSet& ch) {
          const double run_eps = design < 0.0 ? eps : design;
          return min_rate_over_errors(pcmp_run(ch, sched, run_eps, cons, seed, opts).final().precoders, ch, es);
        });
        csv.row({eps, name, mean(r)});
      };
      if (doc) {
        const auto& sched = std::get<PcmpSchedule>(doc->schedule);
        eval(learned_name(sched.iterations()), sched);
      }
      eval(fixed_name(fixed_k), fixed);
    }
    csv.close();
    std::cout << "eval-robust: epsilons=" << s.reals("epsilons").size() << " channels=" << test.size() << " -> "
              << s.text("out") << "\n";
  };
  return c;
}

// ---------------------------------------------------------------------------
// admm-run

Command make_admm(CLI::App& app) {
  Command c;
  c.app = app.add_subcommand("admm-run", "Run the single-band ADMM baseline and report mean rates");
  c.settings = std::make_unique<Settings>(c.app);
  auto& st = *c.settings;
  add_common(st);
  add_dataset(st);
  st.add_text("schedule", "", "Learned ADMM parameter file (overrides the constant parameters)");
  st.add_int("iterations", 100, "I_max for constant parameters");
  st.add_real("lambda", 1.0, "Power penalty lambda");
  st.add_real("mu", 1.0, "Augmentation weight mu");
  st.add_real("mu_a", 0.05, "Analog step");
  st.add_real("mu_d", 0.05, "Digital step");
  st.add_real("mu_y", 1e-4, "Multiplier step");
  st.add_text("multiplier", "descent", "Multiplier update: descent | ascent");
  st.add_text("out", "admm.csv", "CSV output");
  c.run = [](const Settings& s) {
    const auto test = train_test(normalized(load_working(s)), s).second;
    if (test.dims.bands != 1) throw ConfigError("admm-run needs a single-band dataset (B = 1)");
    const auto doc = schedule_if_given(s);
    if (doc && doc->kind() != ScheduleKind::Admm) throw ConfigError("admm-run takes an admm schedule");
    const AdmmParams params = doc ? std::get<AdmmParams>(doc->schedule)
                                  : AdmmParams(as_int(s, "iterations", 0), as_real(s, "lambda", 0.0),
                                               as_real(s, "mu", 0.0), as_real(s, "mu_a", 0.0),
                                               as_real(s, "mu_d", 0.0), as_real(s, "mu_y", 0.0));
    const auto mode_text = s.text("multiplier");
    if (mode_text != "descent" && mode_text != "ascent") throw ConfigError("multiplier must be 'descent' or 'ascent'");
    const auto mode = mode_text == "ascent" ? MultiplierMode::Ascent : MultiplierMode::Descent;
    const std::uint64_t seed = seed_of(s);

    const auto runs = per_channel(test, as_int(s, "threads", 1, 1024), [&](const ChannelSet& ch) {
      auto r = admm_run(ch, params, seed, mode);
      r.rates.push_back(r.final_rate);
      return r.rates;
    });
    const auto m = mean_rows(runs);
    CsvWriter csv(s.text("out"), {"iteration", "method", "mean_rate"});
    for (std::size_t k = 0; k + 1 < m.size(); ++k) csv.row({static_cast<long long>(k), std::string("admm"), m[k]});
    csv.row({static_cast<long long>(params.iterations()), std::string("admm-projected"), m.back()});
    csv.close();
    std::cout << "admm-run: channels=" << test.size() << " final projected rate=" << format_real(m.back()) << " -> "
              << s.text("out") << "\n";
  };
  return c;
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  std::vector<Command> cmds;
  cmds.push_back(make_gen(app));
  cmds.push_back(make_train(app));
  cmds.push_back(make_convergence(app));
  cmds.push_back(make_sweep(app));
  cmds.push_back(make_eval_robust(app));
  cmds.push_back(make_admm(app));
  return cmds;
}

}  // namespace hpcli
