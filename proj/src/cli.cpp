#include "kblink/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kblink/config.hpp"
#include "kblink/corpus.hpp"
#include "kblink/errors.hpp"
#include "kblink/eval.hpp"
#include "kblink/kb.hpp"
#include "kblink/link_corpus.hpp"
#include "kblink/manifest.hpp"
#include "kblink/predictions.hpp"

namespace kblink::cli {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw IoError("input file not found: " + p.string());
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

LoadedKb read_index_file(const fs::path& p) {
  require_file(p);
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  try {
    return read_index(in);
  } catch (const IndexFormatError& e) {
    throw IndexFormatError(p.string() + ": " + e.what());
  }
}

void emit(const std::string& text, const std::optional<fs::path>& path, std::ostream& out) {
  if (path) {
    auto f = open_output(*path);
    f << text;
    if (!f) throw IoError("failed writing " + path->string());
  } else {
    out << text;
  }
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_build_index(const BuildIndexOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    require_file(opts.kb);
    require_file(opts.lists);
    NormalizerProfile profile = NormalizerProfile::kPersian;
    if (opts.config) profile = load_config(*opts.config).normalizer;
    LoadedKb loaded = load_kb(opts.kb, opts.lists, profile);
    auto out = open_output(opts.out);
    write_index(out, loaded.kb, loaded.lists);
    out.close();
    if (!out) throw IoError("failed writing " + opts.out.string());
  });
}

int cmd_link(const LinkOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    Stopwatch watch;
    RunManifest manifest;

    LoadedKb loaded = read_index_file(opts.index);
    manifest.timings.push_back({"load_index", watch.lap()});

    LinkerConfig cfg;
    cfg.normalizer = loaded.kb.profile();
    if (opts.config) {
      require_file(*opts.config);
      cfg = load_config(*opts.config);
      if (cfg.normalizer != loaded.kb.profile())
        throw ConfigError("config normalizer '" + std::string(to_string(cfg.normalizer)) +
                          "' differs from the index ('" + std::string(to_string(loaded.kb.profile())) +
                          "'); rebuild the index");
    }
    if (opts.lambda) cfg.lambda = *opts.lambda;
    if (opts.nil_threshold) cfg.nil_threshold = *opts.nil_threshold;
    validate(cfg, loaded.lists);

    require_file(opts.corpus);
    const auto docs = load_corpus(opts.corpus);
    manifest.timings.push_back({"load_corpus", watch.lap()});

    const auto results = link_corpus(docs, loaded.kb, loaded.lists, cfg, opts.jobs);
    manifest.timings.push_back({"link", watch.lap()});

    {
      auto out = open_output(opts.out);
      write_predictions(out, make_predictions(docs, results));
      out.close();
      if (!out) throw IoError("failed writing " + opts.out.string());
    }
    manifest.timings.push_back({"write", watch.lap()});

    manifest.config = config_to_json(cfg);
    manifest.inputs.push_back({"index", opts.index.string(), sha256_file(opts.index)});
    manifest.inputs.push_back({"corpus", opts.corpus.string(), sha256_file(opts.corpus)});
    if (opts.config) manifest.inputs.push_back({"config", opts.config->string(), sha256_file(*opts.config)});
    auto mf = open_output(manifest_path_for(opts.out));
    mf << manifest.to_json().dump(2) << '\n';
  });
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_file(opts.gold);
    require_file(opts.predictions);
    const auto gold = load_corpus(opts.gold);
    std::ifstream in(opts.predictions, std::ios::binary);
    const auto preds = read_predictions(in);
    const EvalReport report = score_predictions(gold, preds);
    emit(opts.format == OutputFormat::kTable ? render_eval_table(report) : render_eval_records(report), opts.out,
         out);
  });
}

int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    LoadedKb loaded;
    if (opts.index) {
      loaded = read_index_file(*opts.index);
    } else if (opts.kb && opts.lists) {
      require_file(*opts.kb);
      require_file(*opts.lists);
      loaded = load_kb(*opts.kb, *opts.lists);
    } else {
      throw ConfigError("stats needs --index, or both --kb and --lists");
    }
    require_file(opts.corpus);
    const auto report = corpus_stats(load_corpus(opts.corpus), loaded.kb);
    emit(opts.format == OutputFormat::kTable ? render_stats_table(report, opts.per_category)
                                             : render_stats_records(report),
         opts.out, out);
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Unsupervised entity linking against a knowledge-base dump"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  const std::map<std::string, OutputFormat> formats = {{"table", OutputFormat::kTable},
                                                       {"records", OutputFormat::kRecords}};

  BuildIndexOptions build;
  auto* build_cmd = app.add_subcommand("build-index", "Load a KB dump and reference lists into an index cache");
  build_cmd->add_option("--kb", build.kb, "Line-delimited KB dump")->required();
  build_cmd->add_option("--lists", build.lists, "Reference lists JSON")->required();
  build_cmd->add_option("--out", build.out, "Index cache to write")->required();
  build_cmd->add_option("--config", build.config, "Config file (selects the normalizer)");

  LinkOptions link;
  auto* link_cmd = app.add_subcommand("link", "Link every mention of a corpus");
  link_cmd->add_option("--index", link.index, "Index cache from build-index")->required();
  link_cmd->add_option("--corpus", link.corpus, "Corpus file")->required();
  link_cmd->add_option("--out", link.out, "Prediction file to write")->required();
  link_cmd->add_option("--config", link.config, "Linker config file");
  link_cmd->add_option("--lambda", link.lambda, "Context score weight in [0, 1]");
  link_cmd->add_option("--nil-threshold", link.nil_threshold, "NIL threshold");
  link_cmd->add_option("--jobs", link.jobs, "Worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against gold annotations");
  eval_cmd->add_option("--corpus", eval.gold, "Gold corpus file")->required();
  eval_cmd->add_option("--predictions", eval.predictions, "Prediction file")->required();
  eval_cmd->add_option("--out", eval.out, "Report file (default: stdout)");
  eval_cmd->add_option("--format", eval.format, "table | records")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics of a corpus");
  stats_cmd->add_option("--corpus", stats.corpus, "Corpus file")->required();
  stats_cmd->add_option("--index", stats.index, "Index cache");
  stats_cmd->add_option("--kb", stats.kb, "KB dump (instead of --index)");
  stats_cmd->add_option("--lists", stats.lists, "Reference lists (with --kb)");
  stats_cmd->add_option("--out", stats.out, "Report file (default: stdout)");
  stats_cmd->add_option("--format", stats.format, "table | records")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  stats_cmd->add_flag("--per-category", stats.per_category, "Add one column per category");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*build_cmd) return cmd_build_index(build, std::cerr);
  if (*link_cmd) return cmd_link(link, std::cerr);
  if (*eval_cmd) return cmd_evaluate(eval, std::cout, std::cerr);
  return cmd_stats(stats, std::cout, std::cerr);
}

}  // namespace kblink::cli
