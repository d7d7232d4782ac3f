#include "nonhalt/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nonhalt/cycle.hpp"
#include "nonhalt/fixture.hpp"
#include "nonhalt/guard.hpp"
#include "nonhalt/harness/experiments.hpp"
#include "nonhalt/harness/record.hpp"
#include "nonhalt/harness/remote_client.hpp"
#include "nonhalt/harness/sim_client.hpp"
#include "nonhalt/inversion.hpp"
#include "nonhalt/oracle.hpp"
#include "nonhalt/recipe.hpp"

namespace nonhalt {

namespace {

using nlohmann::json;

struct SamplerFlags {
  double tau = 0.0;
  std::size_t top_k = 0;  // 0: whole vocabulary
  double top_p = 1.0;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--tau", tau, "Temperature")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd->add_option("--top-k", top_k, "Top-k (0 keeps the whole vocabulary)")->capture_default_str();
    cmd->add_option("--top-p", top_p, "Top-p")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", seed, "Sampler seed")->capture_default_str();
  }

  SamplerConfig resolve(std::optional<std::size_t> vocab_size) const {
    SamplerConfig c;
    c.tau = tau;
    c.top_p = top_p;
    c.seed = seed;
    c.top_k = vocab_size && (top_k == 0 || top_k > *vocab_size) ? *vocab_size : top_k;
    if (vocab_size) c.validate(*vocab_size);
    return c;
  }
};

struct ClientFlags {
  std::string fixture;
  std::string model_id;
  std::optional<SymbolId> unknown_id;
  bool prompt_ids = false;
  std::string remote_model;
  std::string base_url;
  std::string unit = "word";
  std::optional<std::size_t> w_known;

  void add(CLI::App* cmd) {
    auto* sim = cmd->add_option("--model", fixture, "Simulator model file");
    auto* remote = cmd->add_option("--remote-model", remote_model, "Model name at an OpenAI-compatible endpoint");
    sim->excludes(remote);
    cmd->add_option("--model-id", model_id, "Identifier written to records");
    cmd->add_option("--unknown-id", unknown_id, "Simulator symbol for unmatched prompt bytes");
    cmd->add_flag("--prompt-ids", prompt_ids, "Simulator prompt is a list of symbol ids");
    cmd->add_option("--base-url", base_url, std::string("Endpoint base URL (default $") + kBaseUrlEnv + ")");
    cmd->add_option("--unit", unit, "Remote output unit: word, char or chunk")->capture_default_str();
    cmd->add_option("--w-known", w_known, "Declared context size of the remote model");
  }

  std::unique_ptr<ModelClient> build() const {
    if (!fixture.empty()) {
      SimClientOptions opts;
      opts.encoding = prompt_ids ? PromptEncoding::kIds : PromptEncoding::kTokenize;
      opts.unknown_id = unknown_id;
      const std::string id = model_id.empty() ? std::filesystem::path(fixture).filename().string() : model_id;
      return std::make_unique<SimClient>(id, load_model(fixture), opts);
    }
    if (remote_model.empty()) throw InputError("one of --model or --remote-model is required");
    RemoteClientOptions opts;
    opts.base_url = base_url;
    opts.model = remote_model;
    const auto mode = parse_unit_mode(unit);
    if (!mode) throw InputError("unknown unit mode " + unit);
    opts.unit_mode = *mode;
    opts.w_known = w_known;
    return std::make_unique<RemoteClient>(with_environment(opts));
  }

  json describe(const ModelClient& client) const {
    json j = {{"model_id", client.id()}};
    if (!fixture.empty()) {
      j["client"] = "sim";
      j["fixture"] = fixture;
      j["prompt_ids"] = prompt_ids;
      j["unknown_id"] = unknown_id ? json(*unknown_id) : json(nullptr);
    } else {
      j["client"] = "remote";
      RemoteClientOptions opts;
      opts.base_url = base_url;
      j["base_url"] = with_environment(opts).base_url;
      j["unit"] = unit;
      j["w_known"] = w_known ? json(*w_known) : json(nullptr);
    }
    return j;
  }
};

std::optional<std::size_t> vocab_size_of(const ModelClient& client) {
  if (const auto* sim = dynamic_cast<const SimClient*>(&client)) return sim->model().vocab_size();
  return std::nullopt;
}

struct HarnessFlags {
  std::size_t budget = kDefaultOutputBudget;
  double timeout_s = 300;
  std::size_t c_max = kDefaultGuardCMax;
  std::size_t r_min = kDefaultMinRepeats;
  bool no_logprobs = false;
  std::size_t retries = 2;
  std::string out;

  void add(CLI::App* cmd) {
    cmd->add_option("--budget", budget, "Output budget in units")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--probe-timeout-s", timeout_s, "Wall-clock timeout per probe")->capture_default_str();
    cmd->add_option("--c-max", c_max, "Largest cycle length detected")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--r-min", r_min, "Full repetitions required")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_flag("--no-logprobs", no_logprobs, "Do not request logprobs");
    cmd->add_option("--retries", retries, "Extra attempts after a transport error")->capture_default_str();
    cmd->add_option("--out", out, "JSON Lines record file");
  }

  ProbeOptions probe_options() const {
    ProbeOptions p;
    p.c_max = c_max;
    p.r_min = r_min;
    p.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
    p.request_logprobs = !no_logprobs;
    return p;
  }

  json describe() const {
    return {{"output_budget", budget}, {"probe_timeout_s", timeout_s}, {"c_max", c_max},
            {"r_min", r_min},          {"logprobs", !no_logprobs},    {"retries", retries}};
  }
};

json describe(const SamplerConfig& c) {
  return {{"tau", c.tau}, {"top_k", c.top_k}, {"top_p", c.top_p}, {"seed", c.seed}};
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::string s = text;
  for (char& ch : s) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(s);
  std::vector<T> out;
  T v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw InputError("cannot parse list '" + text + "'");
  return out;
}

std::vector<std::string> read_symbols(std::istream& in) {
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> read_symbol_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read stream file " + path);
  return read_symbols(in);
}

std::string join(std::span<const SymbolId> ids, const std::function<std::string(SymbolId)>& name) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ' ';
    s += name(ids[i]);
  }
  return s;
}

std::string format_anomaly(const CycleAnomaly& a, const Interner& names) {
  return "b=" + std::to_string(a.b) + " c=" + std::to_string(a.c) + " r=" + std::to_string(a.r_obs) +
         " ell=" + std::to_string(a.ell) +
         " cycle=" + join(a.cycle, [&](SymbolId id) { return names.text(id); });
}

std::unique_ptr<RecordSink> open_sink(const std::string& path, const json& config, RecordCache* cache) {
  if (path.empty()) return nullptr;
  if (cache) *cache = RecordCache(load_records(path));
  return std::make_unique<RecordSink>(path, config);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle detection, non-halting certification and probing of language models"};
  app.name("nonhalt");
  app.set_config("--config", "", "Read option values from a key = value file");
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "Detect a cyclic anomaly in a stream file");
  std::string detect_file;
  std::size_t detect_cmax = kDefaultOfflineCMax, detect_rmin = kDefaultMinRepeats;
  detect->add_option("stream-file", detect_file, "Whitespace-separated symbols")->required();
  detect->add_option("--c-max", detect_cmax)->capture_default_str()->check(CLI::PositiveNumber);
  detect->add_option("--r-min", detect_rmin)->capture_default_str()->check(CLI::PositiveNumber);

  // certify
  auto* certify = app.add_subcommand("certify", "Certify non-halting for a stream file");
  std::string certify_file;
  std::size_t certify_w = 0, certify_cmax = kDefaultOfflineCMax;
  bool certify_det = false;
  certify->add_option("stream-file", certify_file)->required();
  certify->add_option("--w", certify_w, "Context size")->required()->check(CLI::PositiveNumber);
  certify->add_flag("--deterministic", certify_det, "Sampling satisfied a determinism condition");
  certify->add_option("--c-max", certify_cmax)->capture_default_str()->check(CLI::PositiveNumber);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate from a simulator model");
  std::string sim_model, sim_prompt;
  std::size_t sim_max_len = 64;
  SamplerFlags sim_sampler;
  simulate_cmd->add_option("--model", sim_model)->required();
  simulate_cmd->add_option("--prompt", sim_prompt, "Symbol ids")->required();
  simulate_cmd->add_option("--max-len", sim_max_len)->capture_default_str()->check(CLI::PositiveNumber);
  sim_sampler.add(simulate_cmd);

  // verify-theorem
  auto* verify = app.add_subcommand("verify-theorem", "Randomized theorem oracle suite");
  CorpusOptions corpus;
  verify->add_option("--trials", corpus.trials)->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--w-min", corpus.w_min)->capture_default_str();
  verify->add_option("--w-max", corpus.w_max)->capture_default_str();
  verify->add_option("--vocab-min", corpus.n_min)->capture_default_str();
  verify->add_option("--vocab-max", corpus.n_max)->capture_default_str();
  verify->add_option("--prompt-max", corpus.prompt_max)->capture_default_str();
  verify->add_option("--extension-cycles", corpus.extension_cycles)->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--seed", corpus.seed)->capture_default_str();

  // invert
  auto* invert = app.add_subcommand("invert", "Search prompts that cycle through a target symbol");
  std::string inv_model, inv_strategy = "exhaustive";
  SymbolId inv_target = 0;
  std::size_t inv_len = 3, inv_budget = 4096;
  InversionOptions inv_opts;
  SamplerFlags inv_sampler;
  invert->add_option("--model", inv_model)->required();
  invert->add_option("--target", inv_target)->required();
  invert->add_option("--len", inv_len)->capture_default_str()->check(CLI::PositiveNumber);
  invert->add_option("--strategy", inv_strategy, "exhaustive, random or hill-climb")->capture_default_str();
  invert->add_option("--budget", inv_budget)->capture_default_str()->check(CLI::PositiveNumber);
  invert->add_option("--horizon", inv_opts.horizon)->capture_default_str();
  invert->add_option("--c-max", inv_opts.c_max)->capture_default_str();
  inv_sampler.add(invert);

  // recipe
  auto* recipe = app.add_subcommand("recipe", "Print a rendered recipe prompt");
  std::string recipe_cycle, recipe_template = "many-words";
  std::size_t recipe_reps = 1;
  recipe->add_option("--cycle", recipe_cycle)->required();
  recipe->add_option("--reps", recipe_reps)->required()->check(CLI::PositiveNumber);
  recipe->add_option("--template", recipe_template, "many-words or words")->capture_default_str();

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "Probe a model once and classify the output");
  ClientFlags probe_client;
  SamplerFlags probe_sampler;
  HarnessFlags probe_harness;
  std::string probe_prompt, probe_cycle, probe_template = "many-words";
  std::size_t probe_reps = 0;
  probe_client.add(probe_cmd);
  probe_sampler.add(probe_cmd);
  probe_harness.add(probe_cmd);
  auto* prompt_opt = probe_cmd->add_option("--prompt", probe_prompt, "Raw prompt text");
  auto* cycle_opt = probe_cmd->add_option("--cycle", probe_cycle, "Cycle text of a recipe query");
  prompt_opt->excludes(cycle_opt);
  probe_cmd->add_option("--reps", probe_reps, "Repetitions of the recipe query");
  probe_cmd->add_option("--template", probe_template)->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Minimum repetitions across temperatures");
  ClientFlags sweep_client;
  SamplerFlags sweep_sampler;
  HarnessFlags sweep_harness;
  std::string sweep_cycle, sweep_template = "words", sweep_temps, sweep_schedule;
  std::size_t sweep_parallel = 4;
  sweep_client.add(sweep);
  sweep_sampler.add(sweep);
  sweep_harness.add(sweep);
  sweep->add_option("--cycle", sweep_cycle)->required();
  sweep->add_option("--template", sweep_template)->capture_default_str();
  sweep->add_option("--temps", sweep_temps, "Comma-separated temperatures (default 0 to 1 by 0.1)");
  sweep->add_option("--schedule", sweep_schedule, "Comma-separated repetition counts");
  sweep->add_option("--parallelism", sweep_parallel)->capture_default_str()->check(CLI::PositiveNumber);

  // wordlist
  auto* wordlist = app.add_subcommand("wordlist", "Minimum repetitions for every word of a list");
  ClientFlags word_client;
  SamplerFlags word_sampler;
  HarnessFlags word_harness;
  std::string word_file, word_template = "words", word_schedule;
  std::size_t word_parallel = 4;
  word_client.add(wordlist);
  word_sampler.add(wordlist);
  word_harness.add(wordlist);
  wordlist->add_option("--words", word_file, "One word per line")->required();
  wordlist->add_option("--template", word_template)->capture_default_str();
  wordlist->add_option("--schedule", word_schedule, "Comma-separated repetition counts");
  wordlist->add_option("--parallelism", word_parallel)->capture_default_str()->check(CLI::PositiveNumber);

  // guard-demo
  auto* guard = app.add_subcommand("guard-demo", "Feed stdin symbols through the stream guard");
  std::string guard_policy;
  guard->add_option("--policy", guard_policy, "key = value policy file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto template_of = [](const std::string& name) {
    const auto t = parse_template(name);
    if (!t) throw InputError("unknown template " + name);
    return *t;
  };
  auto schedule_of = [](const std::string& text) {
    return text.empty() ? default_schedule() : parse_list<std::size_t>(text);
  };

  try {
    if (*detect) {
      Interner names;
      SymbolStream ids;
      for (const auto& s : read_symbol_file(detect_file)) ids.push_back(names.intern(s));
      if (ids.size() < 2) {
        out << "NONE\n";
        return kExitOk;
      }
      const auto a = detect_cycle(ids, detect_cmax, detect_rmin);
      out << (a ? format_anomaly(*a, names) : "NONE") << '\n';
      return kExitOk;
    }

    if (*certify) {
      Interner names;
      SymbolStream ids;
      for (const auto& s : read_symbol_file(certify_file)) ids.push_back(names.intern(s));
      const auto a = ids.size() < 2 ? std::nullopt : detect_cycle(ids, certify_cmax, 1);
      if (!a) {
        out << "NONE\n";
        return kExitOk;
      }
      const auto result = certify_non_halting(*a, certify_w, certify_det);
      if (result.certificate) {
        out << "CERTIFIED " << format_anomaly(*a, names) << " w=" << certify_w
            << " ell_star=" << result.certificate->ell_star << '\n';
      } else {
        out << "REFUSED " << to_string(*result.refusal) << ' ' << format_anomaly(*a, names)
            << " w=" << certify_w << " ell_star=" << a->b + a->c + certify_w << '\n';
      }
      return kExitOk;
    }

    if (*simulate_cmd) {
      const SimModel model = load_model(sim_model);
      const SymbolStream prompt = parse_ids(sim_prompt);
      const SimRun run = simulate(model, prompt, sim_sampler.resolve(model.vocab_size()), sim_max_len);
      out << "output: " << join(run.output, [](SymbolId id) { return std::to_string(id); }) << '\n';
      out << "halted: " << (run.halted ? "true" : "false") << '\n';
      return kExitOk;
    }

    if (*verify) {
      const CorpusReport report = run_theorem_corpus(corpus);
      out << "trials=" << report.trials.size() << " certified=" << report.certified
          << " halted=" << report.halted << " no_anomaly=" << report.no_anomaly
          << " rotations_checked=" << report.rotations_checked << '\n';
      for (std::size_t i = 0; i < report.trials.size(); ++i) {
        for (const auto& v : report.trials[i].verdict.violations) out << "trial " << i << ": " << v << '\n';
      }
      out << report.violations << " violations\n";
      return report.violations == 0 ? kExitOk : kExitViolation;
    }

    if (*invert) {
      const SimModel model = load_model(inv_model);
      const auto strategy = parse_strategy(inv_strategy);
      if (!strategy) throw InputError("unknown strategy " + inv_strategy);
      const auto result = invert_search(model, inv_target, inv_len, *strategy, inv_budget,
                                        inv_sampler.resolve(model.vocab_size()), inv_opts);
      if (result.refusal) {
        out << "REFUSED " << to_string(*result.refusal) << '\n';
        return kExitOk;
      }
      const auto& s = result.stats;
      out << "evaluations=" << s.evaluations << " certified=" << s.certified << " halted=" << s.halted
          << " hits=" << s.hits << " hit_rate=" << s.hit_rate << '\n';
      for (const auto& p : result.prompts) {
        out << join(p, [](SymbolId id) { return std::to_string(id); }) << '\n';
      }
      return kExitOk;
    }

    if (*recipe) {
      out << build_query(template_of(recipe_template), recipe_cycle, recipe_reps).rendered;
      out.flush();
      return kExitOk;
    }

    if (*probe_cmd) {
      auto client = probe_client.build();
      const SamplerConfig config = probe_sampler.resolve(vocab_size_of(*client));
      json cfg = {{"command", "probe"}, {"client", probe_client.describe(*client)},
                  {"sampler", describe(config)}, {"harness", probe_harness.describe()}};
      ProbeRecord rec;
      if (!probe_cycle.empty()) {
        if (probe_reps == 0) throw InputError("--reps is required with --cycle");
        const RecipeQuery q = build_query(template_of(probe_template), probe_cycle, probe_reps);
        cfg["query"] = {{"template_id", to_string(q.template_id)}, {"cycle_text", q.cycle_text}, {"reps", q.repetitions}};
        rec = probe(*client, q, config, probe_harness.budget, probe_harness.probe_options());
      } else {
        if (probe_prompt.empty()) throw InputError("one of --prompt or --cycle is required");
        cfg["prompt"] = probe_prompt;
        rec = probe(*client, probe_prompt, config, probe_harness.budget, probe_harness.probe_options());
      }
      if (auto sink = open_sink(probe_harness.out, cfg, nullptr)) sink->append(rec);
      out << "classification: " << to_string(rec.classification) << '\n';
      out << "finish: " << to_string(rec.finish);
      if (!rec.diagnostic.empty()) out << " (" << rec.diagnostic << ')';
      out << '\n' << "units: " << rec.output.size() << '\n';
      if (rec.anomaly) {
        const auto cyc = rec.cycle_text();
        std::string joined;
        for (std::size_t i = 0; i < cyc.size(); ++i) joined += (i ? " " : "") + cyc[i];
        out << "anomaly: b=" << rec.anomaly->b << " c=" << rec.anomaly->c << " r=" << rec.anomaly->r_obs
            << " ell=" << rec.anomaly->ell << " cycle=" << joined << '\n';
      } else {
        out << "anomaly: NONE\n";
      }
      if (rec.ell_star) out << "ell_star: " << *rec.ell_star << '\n';
      return kExitOk;
    }

    if (*sweep || *wordlist) {
      const bool is_sweep = sweep->parsed();
      ClientFlags& cf = is_sweep ? sweep_client : word_client;
      SamplerFlags& sf = is_sweep ? sweep_sampler : word_sampler;
      HarnessFlags& hf = is_sweep ? sweep_harness : word_harness;
      auto client = cf.build();
      const SamplerConfig config = sf.resolve(vocab_size_of(*client));
      const TemplateId tmpl = template_of(is_sweep ? sweep_template : word_template);
      const auto schedule = schedule_of(is_sweep ? sweep_schedule : word_schedule);

      json cfg = {{"command", is_sweep ? "sweep" : "wordlist"}, {"client", cf.describe(*client)},
                  {"sampler", describe(config)}, {"harness", hf.describe()},
                  {"template_id", to_string(tmpl)}, {"schedule", schedule}};
      ExperimentOptions opts;
      opts.parallelism = is_sweep ? sweep_parallel : word_parallel;
      opts.escalation.probe = hf.probe_options();
      opts.escalation.max_retries = hf.retries;

      if (is_sweep) {
        const auto temps = sweep_temps.empty() ? default_temperatures() : parse_list<double>(sweep_temps);
        cfg["cycle_text"] = sweep_cycle;
        cfg["temps"] = temps;
        RecordCache cache;
        auto sink = open_sink(hf.out, cfg, &cache);
        opts.escalation.sink = sink.get();
        opts.escalation.cache = sink ? &cache : nullptr;
        const auto rows = run_temperature_sweep(*client, sweep_cycle, tmpl, temps, config, schedule,
                                                hf.budget, opts);
        out << format_sweep_table(rows);
      } else {
        const auto words = load_wordlist(word_file);
        cfg["words_file"] = word_file;
        cfg["words"] = words;
        RecordCache cache;
        auto sink = open_sink(hf.out, cfg, &cache);
        opts.escalation.sink = sink.get();
        opts.escalation.cache = sink ? &cache : nullptr;
        const auto summary = run_wordlist_experiment(*client, words, tmpl, config, schedule, hf.budget, opts);
        out << format_wordlist_table(summary);
      }
      return kExitOk;
    }

    if (*guard) {
      const GuardPolicy policy = guard_policy.empty() ? GuardPolicy{} : load_guard_policy(guard_policy);
      GuardState state = guard_new(policy);
      Interner names;
      std::string tok;
      std::size_t unit = 0;
      while (in >> tok) {
        ++unit;
        const GuardAction action = state.feed(names.intern(tok));
        out << unit << '\t' << tok << '\t' << describe(action) << '\n';
        if (action.terminated()) return kExitOk;
      }
      out << "END after " << unit << " units\n";
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitUsage;
}

}  // namespace nonhalt
