/*
 * Copyright 2026 The Trident Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run trident(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + TRIDENT_CLI + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string src(const std::string& rel) { return std::string(TRIDENT_SOURCE_DIR) + "/" + rel; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("trident-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static json read_json(const std::string& p) {
    std::ifstream in(p);
    return json::parse(in);
  }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

TEST_F(CliTest, SimReproducesGoldenLogits) {
  const auto r = trident("sim --model " + src("models/tiny_cnn.json") + " --input " + src("models/tiny_inputs.tcal") +
                         " --limit 4 --check --logits-out " + path("logits.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto golden = read_json(src("models/tiny_golden.json"));
  const auto got = read_json(path("logits.json"));
  EXPECT_EQ(got["model_checksum"], golden["model_checksum"]);
  EXPECT_EQ(got["logits"], golden["logits"]);
  EXPECT_NE(r.out.find("argmax agreement with the plaintext reference: 4/4"), std::string::npos);
  EXPECT_NE(r.out.find("informational"), std::string::npos);
}

TEST_F(CliTest, SimIsDeterministicAndWritesReports) {
  const std::string base = "sim --model " + src("models/tiny_cnn.json") + " --random 1 --delivery dealer";
  ASSERT_EQ(trident(base + " --report " + path("a.json") + " --transcript-csv " + path("t.csv") + " --ops-csv " +
                    path("o.csv")).code,
            0);
  ASSERT_EQ(trident(base + " --report " + path("b.json")).code, 0);
  const auto a = read_json(path("a.json")), b = read_json(path("b.json"));
  EXPECT_EQ(a["logits"], b["logits"]);
  EXPECT_EQ(a["transcript"], b["transcript"]);
  EXPECT_GT(fs::file_size(path("t.csv")), 0u);
  EXPECT_GT(fs::file_size(path("o.csv")), 0u);
  ASSERT_EQ(trident(base + " --seed 9 --report " + path("c.json")).code, 0);
  EXPECT_NE(read_json(path("c.json"))["logits"], a["logits"]);
}

TEST_F(CliTest, ExitCodes) {
  const std::string model = src("models/tiny_cnn.json");
  EXPECT_EQ(trident("sim --model " + model + " --no-such-flag").code, 2);
  EXPECT_EQ(trident("sim --model " + model + " --preset huge").code, 2);
  EXPECT_EQ(trident("sim --model " + path("missing.json")).code, 2);
  EXPECT_EQ(trident("sim --model " + model + " --preset paper").code, 2);  // model declares toy

  const auto drop = trident("sim --model " + model + " --random 1 --inject-fault drop-keys");
  EXPECT_EQ(drop.code, 3) << drop.out;
  EXPECT_NE(drop.out.find("cloud, phase input, inference 0, stage 0 (layer 0)"), std::string::npos) << drop.out;

  const auto table = trident("sim --model " + model + " --random 1 --inject-fault gc-table");
  EXPECT_EQ(table.code, 4) << table.out;
  EXPECT_NE(table.out.find("proxy, phase activation"), std::string::npos) << table.out;

  const auto noise = trident("sim --model " + model + " --random 1 --inject-fault noise");
  EXPECT_EQ(noise.code, 4) << noise.out;
  EXPECT_NE(noise.out.find("warning: stage 0: estimated noise exceeds the budget"), std::string::npos);
}

TEST_F(CliTest, ConfigFileAndEnvironment) {
  write("ok.json", R"({"key_mode": "all-keys", "seed": 5, "delivery": "dealer"})");
  write("bad.json", R"({"seeed": 5})");
  const std::string model = src("models/tiny_cnn.json");
  EXPECT_EQ(trident("noise-report --model " + model + " --config " + path("bad.json")).code, 2);
  EXPECT_EQ(trident("noise-report --model " + model, "TRIDENT_CONFIG=" + path("bad.json")).code, 2);
  const auto env = trident("noise-report --model " + model, "TRIDENT_CONFIG=" + path("ok.json"));
  ASSERT_EQ(env.code, 0) << env.out;
  EXPECT_NE(env.out.find("key mode all-keys"), std::string::npos);
  // Flags override the file.
  const auto flag = trident("noise-report --model " + model + " --key-mode log-keys", "TRIDENT_CONFIG=" + path("ok.json"));
  EXPECT_NE(flag.out.find("key mode log-keys"), std::string::npos);
}

TEST_F(CliTest, KeygenFootprintsAndDeterminism) {
  const std::string model = " --model " + src("models/tiny_cnn.json");
  ASSERT_EQ(trident("keygen --key-mode log-keys --out-dir " + path("log") + model + " --report " + path("log.json")).code,
            0);
  ASSERT_EQ(trident("keygen --key-mode all-keys --out-dir " + path("all") + model).code, 0);
  ASSERT_EQ(trident("keygen --key-mode log-keys --out-dir " + path("again") + model).code, 0);
  ASSERT_EQ(trident("keygen --key-mode log-keys --seed 2 --out-dir " + path("other") + model).code, 0);
  const auto report = read_json(path("log.json"));
  EXPECT_EQ(report["footprint"]["log-keys"]["keys"], 11);
  EXPECT_GT(fs::file_size(path("all/client.galois")), fs::file_size(path("log/client.galois")));
  for (const char* f : {"client.sk", "proxy.sk", "client.galois", "client.reenc"}) {
    std::ifstream a(path(std::string("log/") + f), std::ios::binary), b(path(std::string("again/") + f), std::ios::binary),
        c(path(std::string("other/") + f), std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {}),
        sc((std::istreambuf_iterator<char>(c)), {});
    EXPECT_FALSE(sa.empty());
    EXPECT_EQ(sa, sb) << f;
    EXPECT_NE(sa, sc) << f;
  }
  EXPECT_EQ(trident("keygen --preset nope --out-dir " + path("x")).code, 2);
}

TEST_F(CliTest, GcStatsRatios) {
  const auto r = trident("gc-stats --report " + path("gc.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("t_bits=19, truncated b=10"), std::string::npos);
  const auto report = read_json(path("gc.json"));
  int ratios = 0;
  for (const auto& row : report["rows"]) {
    if (row["mode"] != "ratio") continue;
    ++ratios;
    EXPECT_LE(row["offline_ratio"].get<double>(), 0.35);
    EXPECT_LE(row["online_ratio"].get<double>(), 0.60);
  }
  EXPECT_GT(ratios, 0);
}

TEST_F(CliTest, NoiseReportBudgetPositive) {
  for (const char* m : {"models/tiny_cnn.json", "models/tiny_cnn_d4.json"}) {
    ASSERT_EQ(trident(std::string("noise-report --model ") + src(m) + " --report " + path("n.json")).code, 0);
    const auto report = read_json(path("n.json"));
    int impala = 0;
    for (const auto& row : report["rows"]) {
      if (row["variant"] != "impala") continue;
      ++impala;
      EXPECT_GT(row["budget_remaining_bits"].get<double>(), 0.0) << m << " layer " << row["layer"];
    }
    EXPECT_GT(impala, 0);
  }
}

TEST_F(CliTest, BenchEmitsRows) {
  ASSERT_EQ(trident("bench --suite gc --suite sparsity --out " + path("b.csv")).code, 0);
  std::ifstream in(path("b.csv"));
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("suite,name,stage,pmult", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4 + 5);
}

TEST_F(CliTest, GenModelCertifiesBound) {
  ASSERT_EQ(trident("gen-model --depth 2 --seed 3 --count 10 --out " + path("m.json") + " --inputs-out " +
                    path("i.tcal")).code,
            0);
  const auto m = read_json(path("m.json"));
  EXPECT_GT(m["value_bits"].get<int>(), 1);
  const auto r = trident("sim --model " + path("m.json") + " --input " + path("i.tcal") +
                         " --limit 2 --delivery dealer --check");
  EXPECT_EQ(r.code, 0) << r.out;
}

// Three role processes over loopback reproduce the in-process logits.
TEST_F(CliTest, RolesOverTcp) {
  std::mt19937 rng(static_cast<unsigned>(::getpid()));
  const int base = 30000 + static_cast<int>(rng() % 20000);
  const std::string ep[3] = {"127.0.0.1:" + std::to_string(base), "127.0.0.1:" + std::to_string(base + 1),
                             "127.0.0.1:" + std::to_string(base + 2)};
  const std::string peers = " --connect client=" + ep[0] + " --connect cloud=" + ep[1] + " --connect proxy=" + ep[2];
  const std::string common = " --model " + src("models/tiny_cnn.json") + " --delivery dealer" + peers;
  auto cloud = std::async(std::launch::async, [&] { return trident("role cloud --listen " + ep[1] + common); });
  auto proxy = std::async(std::launch::async, [&] { return trident("role proxy --listen " + ep[2] + common); });
  const auto client = trident("role client --listen " + ep[0] + common + " --input " + src("models/tiny_inputs.tcal") +
                              " --limit 2 --logits-out " + path("tcp.json"));
  EXPECT_EQ(client.code, 0) << client.out;
  EXPECT_EQ(cloud.get().code, 0);
  EXPECT_EQ(proxy.get().code, 0);
  ASSERT_EQ(trident("sim --model " + src("models/tiny_cnn.json") + " --delivery dealer --input " +
                    src("models/tiny_inputs.tcal") + " --limit 2 --logits-out " + path("sim.json")).code,
            0);
  EXPECT_EQ(read_json(path("tcp.json"))["logits"], read_json(path("sim.json"))["logits"]);
}

}  // namespace
