#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "kblink/cli.hpp"
#include "kblink/manifest.hpp"
#include "kblink/predictions.hpp"
#include "test_support.hpp"

using namespace kblink;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("kblink_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path build_index(const TempDir& tmp) {
  std::ostringstream err;
  cli::BuildIndexOptions opts{kbtest::data_path("mini_kb.jsonl"), kbtest::data_path("lists.json"), tmp / "mini.idx", {}};
  REQUIRE(cli::cmd_build_index(opts, err) == 0);
  return opts.out;
}

std::vector<PredictedDocument> read_preds(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return read_predictions(in);
}

}  // namespace

TEST_CASE("build-index is byte-identical on rerun") {
  TempDir tmp;
  const auto first = build_index(tmp);
  const std::string bytes = kbtest::slurp(first);
  build_index(tmp);
  CHECK(kbtest::slurp(first) == bytes);
  CHECK_FALSE(bytes.empty());
}

TEST_CASE("link writes predictions and a manifest with input digests") {
  TempDir tmp;
  const auto index = build_index(tmp);
  std::ostringstream err;
  cli::LinkOptions opts;
  opts.index = index;
  opts.corpus = kbtest::data_path("mini_corpus.jsonl");
  opts.config = kbtest::data_path("config.json");
  opts.out = tmp / "pred.jsonl";
  REQUIRE(cli::cmd_link(opts, err) == 0);
  CHECK(err.str().empty());

  const auto manifest =
      RunManifest::from_json(nlohmann::json::parse(kbtest::slurp(manifest_path_for(opts.out))));
  CHECK(manifest.tool_version == kToolVersion);
  REQUIRE(manifest.inputs.size() == 3);
  CHECK(manifest.inputs[0].sha256 == sha256_file(index));
  CHECK(manifest.inputs[1].sha256 == sha256_file(opts.corpus));
  CHECK(manifest.inputs[2].sha256 == sha256_file(*opts.config));
  CHECK(manifest.config.at("lambda") == 0.5);
  CHECK(manifest.timings.size() == 4);
}

TEST_CASE("sha256 of a known string") {
  TempDir tmp;
  write_file(tmp / "abc", "abc");
  CHECK(sha256_file(tmp / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cli output matches the golden predictions") {
  TempDir tmp;
  std::ostringstream err;
  cli::LinkOptions opts;
  opts.index = build_index(tmp);
  opts.corpus = kbtest::data_path("mini_corpus.jsonl");
  opts.out = tmp / "pred.jsonl";
  REQUIRE(cli::cmd_link(opts, err) == 0);
  const auto preds = read_preds(opts.out);
  const auto golden = kbtest::read_jsonl(kbtest::fixture_path("golden_predictions.jsonl"));
  REQUIRE(preds.size() == golden.size());
  for (std::size_t d = 0; d < preds.size(); ++d) {
    REQUIRE(preds[d].mentions.size() == golden[d].at("mentions").size());
    for (std::size_t i = 0; i < preds[d].mentions.size(); ++i) {
      const auto& pm = preds[d].mentions[i];
      const auto& gm = golden[d].at("mentions")[i];
      CHECK(pm.prediction.entity.value_or("NIL") == gm.at("prediction").get<std::string>());
      CHECK(pm.score == doctest::Approx(gm.at("score").get<double>()).epsilon(1e-12));
      REQUIRE(pm.ambiguity.size() == gm.at("ambiguity").size());
      for (std::size_t k = 0; k < pm.ambiguity.size(); ++k)
        CHECK(pm.ambiguity[k].id == gm.at("ambiguity")[k].at("id").get<std::string>());
    }
  }
}

TEST_CASE("nil threshold above one makes every prediction nil") {
  TempDir tmp;
  std::ostringstream err;
  cli::LinkOptions opts;
  opts.index = build_index(tmp);
  opts.corpus = kbtest::data_path("mini_corpus.jsonl");
  opts.out = tmp / "pred.jsonl";
  opts.nil_threshold = 1.1;
  REQUIRE(cli::cmd_link(opts, err) == 0);
  std::size_t mentions = 0;
  for (const auto& d : read_preds(opts.out))
    for (const auto& m : d.mentions) {
      CHECK(m.prediction.is_nil());
      ++mentions;
    }
  CHECK(mentions == 33);
}

TEST_CASE("empty corpus gives an empty prediction file") {
  TempDir tmp;
  write_file(tmp / "empty.jsonl", "");
  std::ostringstream err;
  cli::LinkOptions opts;
  opts.index = build_index(tmp);
  opts.corpus = tmp / "empty.jsonl";
  opts.out = tmp / "pred.jsonl";
  REQUIRE(cli::cmd_link(opts, err) == 0);
  CHECK(kbtest::slurp(opts.out).empty());

  std::ostringstream out;
  cli::StatsOptions stats;
  stats.corpus = opts.corpus;
  stats.index = opts.index;
  CHECK(cli::cmd_stats(stats, out, err) == 0);
  CHECK(out.str().find("Documents") != std::string::npos);
}

TEST_CASE("missing and invalid inputs exit 1 with a diagnostic") {
  TempDir tmp;
  const auto index = build_index(tmp);
  std::ostringstream err;
  cli::LinkOptions opts;
  opts.index = tmp / "nope.idx";
  opts.corpus = kbtest::data_path("mini_corpus.jsonl");
  opts.out = tmp / "pred.jsonl";
  CHECK(cli::cmd_link(opts, err) == 1);
  CHECK(err.str().find("nope.idx") != std::string::npos);
  CHECK_FALSE(fs::exists(opts.out));

  std::ostringstream err2;
  opts.index = index;
  opts.lambda = 2.0;
  CHECK(cli::cmd_link(opts, err2) == 1);
  CHECK(err2.str().find("lambda") != std::string::npos);

  std::ostringstream err3;
  opts.lambda.reset();
  write_file(tmp / "identity.json", R"({"normalizer":"identity"})");
  opts.config = tmp / "identity.json";
  CHECK(cli::cmd_link(opts, err3) == 1);
  CHECK(err3.str().find("rebuild") != std::string::npos);

  std::ostringstream err4;
  write_file(tmp / "bad.idx", "KBLINKIX garbage");
  cli::StatsOptions stats;
  stats.corpus = kbtest::data_path("mini_corpus.jsonl");
  stats.index = tmp / "bad.idx";
  std::ostringstream out;
  CHECK(cli::cmd_stats(stats, out, err4) == 1);
  CHECK(out.str().empty());
}

TEST_CASE("evaluate through the cli reproduces the system rows") {
  TempDir tmp;
  std::vector<Document> gold;
  std::vector<PredictedDocument> preds;
  for (const auto& fx : kbtest::system_count_fixtures()) {
    if (std::string(fx.category) == "Total") continue;
    auto [g, p] = kbtest::count_document(std::string("doc-") + fx.category, fx.category, fx.tp, fx.fp, fx.fn);
    gold.push_back(std::move(g));
    preds.push_back(std::move(p));
  }
  {
    std::ofstream g(tmp / "gold.jsonl", std::ios::binary);
    write_corpus(g, gold);
    std::ofstream p(tmp / "pred.jsonl", std::ios::binary);
    write_predictions(p, preds);
  }
  cli::EvaluateOptions opts{tmp / "gold.jsonl", tmp / "pred.jsonl", tmp / "report.json", cli::OutputFormat::kRecords};
  std::ostringstream out, err;
  REQUIRE(cli::cmd_evaluate(opts, out, err) == 0);
  const auto report = nlohmann::json::parse(kbtest::slurp(tmp / "report.json"));
  for (const auto& row : kbtest::published_rows()) {
    if (std::string(row.category) == "Total") continue;
    const auto& got = report.at("per_category").at(row.category);
    CAPTURE(row.category);
    CHECK(std::abs(got.at("precision").get<double>() - row.sys_p) < 5e-5);
    CHECK(std::abs(got.at("recall").get<double>() - row.sys_r) < 5e-5);
    CHECK(std::abs(got.at("f1").get<double>() - row.sys_f1) <= 1e-4);
  }

  opts.format = cli::OutputFormat::kTable;
  opts.out.reset();
  REQUIRE(cli::cmd_evaluate(opts, out, err) == 0);
  CHECK(out.str().find("0.8174  0.9961") != std::string::npos);
}

TEST_CASE("the installed binary follows the exit-code contract") {
  TempDir tmp;
  const std::string tool = KBLINK_TOOL;
  const std::string idx = (tmp / "i.idx").string();
  const std::string build = tool + " build-index --kb " + kbtest::data_path("mini_kb.jsonl").string() + " --lists " +
                            kbtest::data_path("lists.json").string() + " --out " + idx + " 2>/dev/null";
  CHECK(std::system(build.c_str()) == 0);
  const std::string link = tool + " link --index " + idx + " --corpus " + kbtest::data_path("mini_corpus.jsonl").string() +
                           " --out " + (tmp / "p.jsonl").string() + " --jobs 2";
  CHECK(std::system(link.c_str()) == 0);
  const std::string missing = tool + " link --index " + (tmp / "absent").string() + " --corpus x --out y 2>/dev/null";
  CHECK(WEXITSTATUS(std::system(missing.c_str())) == 1);
  const std::string usage = tool + " link 2>/dev/null";
  CHECK(std::system(usage.c_str()) != 0);
}
