#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "pandora/errors.hpp"
#include "pandora/instance_io.hpp"
#include "pandora/pipeline.hpp"

using namespace pandora;
using namespace pandora::testing;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string cli_path() {
    const char* p = std::getenv("PANDORA_CLI");
    return p ? p : "";
}

std::string golden_dir() {
    const char* p = std::getenv("PANDORA_GOLDEN_DIR");
    return p ? p : "";
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("generator: reproducible and validator-clean batches") {
    GeneratorParams params;
    params.n = 3;
    params.horizon = 8;
    params.p_max = 1;
    params.absent_prob = 0.1;
    const Instance a = generate_instance(params, 12345);
    const Instance b = generate_instance(params, 12345);
    CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());

    for (int k = 0; k < 100; ++k) {
        const Instance inst = generate_instance(params, mix_seed(777, {static_cast<std::uint64_t>(k)}));
        CHECK(validate(inst).empty());
    }

    GeneratorParams fixed = params;
    fixed.variant = VariantTag::Fixed;
    fixed.absent_prob = 0.0;
    const Instance f = generate_instance(fixed, 5);
    CHECK(validate(f).empty());
    for (const auto& box : f.boxes) {
        CHECK(box.cost_constant());
        CHECK(box.rewards_constant());
    }

    GeneratorParams instant = params;
    instant.variant = VariantTag::Instant;
    const Instance inst2 = generate_instance(instant, 6);
    for (const auto& box : inst2.boxes) CHECK(box.processing_time == 0);
}

TEST_CASE("json round trip is canonical on random instances") {
    Rng rng(2024);
    for (int round = 0; round < 50; ++round) {
        GeneratorParams params;
        params.n = static_cast<int>(rng.range(1, 4));
        params.p_max = 2;
        params.absent_prob = round % 2 ? 0.2 : 0.0;
        params.variant = round % 3 == 0 ? VariantTag::Fixed : VariantTag::General;
        const Instance inst = generate_instance(params, rng.u64());
        const auto j = instance_to_json(inst);
        const Instance back = instance_from_json(j);
        CHECK(instance_to_json(back).dump() == j.dump());
        CHECK(validate(back).empty());
    }
}

TEST_CASE("pipeline monte carlo mode tracks the exact value") {
    const Instance f1 = fixture_f1();
    PipelineOptions exact_opts;
    const Rat exact = run_pipeline(f1, exact_opts).expected_utility;

    PipelineOptions mc_opts;
    mc_opts.mc_trials = 20000;
    const PipelineResult mc = run_pipeline(f1, mc_opts);
    CHECK_FALSE(mc.exact);
    CHECK(mc.report.at("evaluation").at("mode") == "monte_carlo");
    const double mean = mc.report.at("evaluation").at("mean").get<double>();
    const double se = mc.report.at("evaluation").at("stderr").get<double>();
    CHECK(std::abs(mean - rat_to_double(exact)) <= 4 * se + 1e-12);
}

TEST_CASE("pipeline: empty-reward instance reports utility 0") {
    Instance empty;
    empty.horizon = 2;
    BoxSpec b;
    b.cost.assign(2, Rat(1));
    b.rewards.assign(2, DiscreteDistribution::point(Rat(0)));
    empty.boxes.push_back(b);

    PipelineOptions options;
    const PipelineResult result = run_pipeline(empty, options);
    CHECK(result.exact);
    CHECK(result.expected_utility == 0);
    CHECK(result.report.at("evaluation").at("expected_utility") == 0.0);
}

TEST_CASE("pipeline: oracle ratio present and above the guarantee on F1") {
    const Instance f1 = fixture_f1();
    PipelineOptions options;
    options.with_oracle = true;
    const PipelineResult result = run_pipeline(f1, options);
    REQUIRE(result.report.contains("oracle"));
    CHECK(result.report.at("oracle").at("pass").get<bool>());
    CHECK(result.report.at("oracle").at("ratio").get<double>() >= 1.0 / 21.3);
    CHECK(result.report.at("solver").at("x_in_bP").get<bool>());

    // deterministic given the seed
    const PipelineResult again = run_pipeline(f1, options);
    CHECK(result.report.dump() == again.report.dump());
}

TEST_CASE("pipeline report matches the golden file") {
    REQUIRE(!golden_dir().empty());
    const std::string golden_path = golden_dir() + "/f1_report.json";
    std::ifstream probe(golden_path);
    REQUIRE_MESSAGE(probe.good(), "golden file missing: run tools/make_golden");
    const Instance f1 = load_instance(golden_dir() + "/f1_instance.json");
    PipelineOptions options;
    options.with_oracle = true;
    const PipelineResult result = run_pipeline(f1, options);
    CHECK(result.report.dump(2) + "\n" == slurp(golden_path));
}

#define REQUIRE_CLI() \
    if (cli_path().empty()) { MESSAGE("PANDORA_CLI not set; skipping"); return; }

TEST_CASE("cli: generate is byte-reproducible and validates") {
    REQUIRE_CLI();
    const std::string a = "/tmp/pandora_gen_a.json";
    const std::string b = "/tmp/pandora_gen_b.json";
    REQUIRE(run_cli("generate --n 3 --p-max 1 --absent-prob 0.15 --seed 99 --out " + a) == 0);
    REQUIRE(run_cli("generate --n 3 --p-max 1 --absent-prob 0.15 --seed 99 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    const Instance inst = load_instance(a);
    CHECK(validate(inst).empty());
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("cli: reservation and hypergraph CSV") {
    REQUIRE_CLI();
    const std::string inst = "/tmp/pandora_inst.json";
    save_instance(fixture_f1(), inst);
    const std::string out = "/tmp/pandora_res.csv";
    REQUIRE(run_cli("reservation --instance " + inst + " --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("box,time,r,expected_y\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF endings

    REQUIRE(run_cli("hypergraph --instance " + inst + " --out " + out) == 0);
    CHECK(slurp(out).rfind("box,start,span_end,cost,r,expected_y\n", 0) == 0);
    std::remove(inst.c_str());
    std::remove(out.c_str());
}

TEST_CASE("cli: exit codes") {
    REQUIRE_CLI();
    const std::string bad = "/tmp/pandora_bad.json";
    {
        std::ofstream f(bad);
        f << "{\"format\": \"pandora-time/1\", \"horizon\": 1, \"boxes\": [{\"cost\": {\"const\": \"1\"}, "
             "\"p\": 3, \"rewards\": {\"const\": [[\"1\", \"1\"]]}, \"discount\": {\"kind\": \"identity\"}}]}";
    }
    CHECK(run_cli("oracle --instance " + bad) / 256 == 2);  // horizon < n + sum p

    const std::string big = "/tmp/pandora_big.json";
    REQUIRE(run_cli("generate --n 4 --seed 1 --out " + big) == 0);
    CHECK(run_cli("oracle --instance " + big) / 256 == 3);  // guard trip

    CHECK(run_cli("oracle --instance /tmp/definitely_missing.json") / 256 == 2);
    std::remove(bad.c_str());
    std::remove(big.c_str());
}

TEST_CASE("cli: pipeline reproducibility and compare schema") {
    REQUIRE_CLI();
    const std::string inst = "/tmp/pandora_f1.json";
    save_instance(fixture_f1(), inst);
    const std::string a = "/tmp/pandora_rep_a.json";
    const std::string b = "/tmp/pandora_rep_b.json";
    REQUIRE(run_cli("pipeline --instance " + inst + " --oracle --seed 4 --out " + a) == 0);
    REQUIRE(run_cli("pipeline --instance " + inst + " --oracle --seed 4 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));

    const std::string csv = "/tmp/pandora_cmp.csv";
    REQUIRE(run_cli("compare --instance " + inst + " --seed 4 --out " + csv) == 0);
    CHECK(slurp(csv).rfind("instance_id,strategy,value,oracle,ratio,guarantee_bound,pass\n", 0) == 0);
    CHECK(slurp(csv).find("fail") == std::string::npos);
    std::remove(inst.c_str());
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("cli: batch over a generator config") {
    REQUIRE_CLI();
    const std::string config = "/tmp/pandora_batch.json";
    {
        std::ofstream f(config);
        f << R"({"generator": {"count": 2, "n": 2, "variant": "fixed"}, "strategies": ["main", "fixed"], "seed": 11})";
    }
    const std::string out = "/tmp/pandora_batch.csv";
    REQUIRE(run_cli("batch --config " + config + " --out " + out) == 0);
    const std::string csv = slurp(out);
    // header + 2 instances x 2 strategies
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("fail") == std::string::npos);

    // empty instance list: header-only CSV
    {
        std::ofstream f(config);
        f << R"({"instances": []})";
    }
    REQUIRE(run_cli("batch --config " + config + " --out " + out) == 0);
    CHECK(slurp(out) == "instance_id,strategy,value,oracle,ratio,guarantee_bound,pass\n");
    std::remove(config.c_str());
    std::remove(out.c_str());
}

TEST_CASE("cli: instant strategy route") {
    REQUIRE_CLI();
    const std::string inst = "/tmp/pandora_instant.json";
    {
        GeneratorParams params;
        params.n = 3;
        params.variant = VariantTag::Instant;
        params.absent_prob = 0.1;
        save_instance(generate_instance(params, 33), inst);
    }
    const std::string out = "/tmp/pandora_instant.json.out";
    REQUIRE(run_cli("run --instance " + inst + " --strategy instant --exact --format json --out " + out) == 0);
    CHECK(slurp(out).find("expected_utility") != std::string::npos);
    // instant on a non-instant instance is a structural error (exit 2)
    const std::string f1 = "/tmp/pandora_nf1.json";
    save_instance(fixture_f1(), f1);
    CHECK(run_cli("run --instance " + f1 + " --strategy instant --exact") / 256 == 2);
    std::remove(inst.c_str());
    std::remove(out.c_str());
    std::remove(f1.c_str());
}

TEST_CASE("cli: trace dump and guard override") {
    REQUIRE_CLI();
    const std::string inst = "/tmp/pandora_fix.json";
    {
        GeneratorParams params;
        params.n = 2;
        params.variant = VariantTag::Fixed;
        save_instance(generate_instance(params, 21), inst);
    }
    const std::string out = "/tmp/pandora_traces.csv";
    REQUIRE(run_cli("run --instance " + inst + " --strategy fixed --trials 20 --dump-traces --seed 2 --out " +
                    out) == 0);
    CHECK(slurp(out).rfind("trial,step,box,time,value,cost,halted_at,accepted,collected_box,utility\n",
                           0) == 0);

    // PANDORA_GUARD_OVERRIDE lifts the oracle guards
    const std::string big = "/tmp/pandora_big4.json";
    REQUIRE(run_cli("generate --n 4 --seed 1 --out " + big) == 0);
    CHECK(run_cli("oracle --instance " + big) / 256 == 3);
    const std::string env_cmd = std::string("PANDORA_GUARD_OVERRIDE=4,8,4 ") + cli_path() +
                                " oracle --instance " + big + " > /dev/null 2>&1";
    CHECK(std::system(env_cmd.c_str()) == 0);
    std::remove(inst.c_str());
    std::remove(out.c_str());
    std::remove(big.c_str());
}
