#include "latharm/config.hpp"

#include "latharm/io.hpp"
#include "latharm/rng.hpp"
#include "latharm/version.hpp"

#include "doctest.h"

#include <algorithm>
#include <complex>
#include <filesystem>
#include <string>

using namespace latharm;
namespace fs = std::filesystem;

namespace {

GridFunction sample_grid_function() {
  const LatticeBox box(point(-2, -1), point(1, 2));
  CVector v(box.cardinality());
  detail::Rng rng(31337);
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  v[0] = Complex(0.1, -1.0 / 3.0);
  v[1] = Complex(1e-100, 6.02e23);
  v[2] = Complex(-0.0, 0.0);
  return GridFunction(box, v);
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / ("latharm-io-test-" + leaf);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("grid csv serialization is bit exact") {
  const GridFunction f = sample_grid_function();
  const std::string once = to_csv(f);
  const GridFunction g = grid_function_from_csv(once);
  CHECK(g.dim() == f.dim());
  CHECK(g.box().lo(0) == -2);
  CHECK(g.box().hi(1) == 2);
  CHECK(max_abs_difference(f, g) == 0.0);
  CHECK(to_csv(g) == once);
}

TEST_CASE("grid json round trips, including through text") {
  const GridFunction f = sample_grid_function();
  const GridFunction direct = grid_function_from_json(to_json(f));
  CHECK(max_abs_difference(f, direct) == 0.0);
  const GridFunction via_text =
      grid_function_from_json(nlohmann::json::parse(to_json(f).dump()));
  CHECK(max_abs_difference(f, via_text) == 0.0);
}

TEST_CASE("malformed grid csv is rejected with a reason") {
  CHECK_THROWS_WITH_AS(grid_function_from_csv("x,re,im\n0,1,0\n"),
                       doctest::Contains("header"), IoError);
  CHECK_THROWS_AS(grid_function_from_csv("n_1,re\n0,1\n"), IoError);
  CHECK_THROWS_WITH_AS(grid_function_from_csv("n_1,re,im\n0,1,0\n2,1,0\n"),
                       doctest::Contains("bounding box"), IoError);
  CHECK_THROWS_WITH_AS(grid_function_from_csv("n_1,re,im\n1,1,0\n0,1,0\n"),
                       doctest::Contains("order"), IoError);
  CHECK_THROWS_WITH_AS(grid_function_from_csv("n_1,re,im\n0,xyz,0\n"),
                       doctest::Contains("expected a number"), IoError);
  CHECK_THROWS_AS(grid_function_from_csv(""), IoError);
  nlohmann::json bad = to_json(sample_grid_function());
  bad.erase("im");
  CHECK_THROWS_AS(grid_function_from_json(bad), IoError);
}

TEST_CASE("torus sample tables carry indices, points, and grid metadata") {
  const TorusGrid grid = TorusGrid::uniform(2, 8);
  const TorusSamples samples = sample_symbol(symbols::laplacian(2), grid);
  const std::string csv = to_csv(samples);
  CHECK(csv.rfind("k_1,k_2,xi_1,xi_2,re,im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 64);
  const nlohmann::json meta = grid_metadata(samples);
  CHECK(meta["sizes"] == nlohmann::json::array({8, 8}));
  CHECK(meta["library_version"] == kVersion);
}

TEST_CASE("a kernel table reassembles exactly from csv plus metadata") {
  const KernelTable table =
      synthesize_kernel(symbols::wave_cos(1.0, 1), LatticeBox::centered(1, 8), 1e-10);
  const nlohmann::json meta = nlohmann::json::parse(kernel_metadata(table).dump());
  const KernelTable back = kernel_table_from_parts(to_csv(table), meta);
  CHECK(back.symbol_tag == table.symbol_tag);
  CHECK(back.box.lo(0) == table.box.lo(0));
  CHECK(back.box.hi(0) == table.box.hi(0));
  CHECK((back.values - table.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.quadrature_size == table.quadrature_size);
  CHECK(back.aliasing_estimate == table.aliasing_estimate);
  CHECK(back.tol == table.tol);
  CHECK(back.converged == table.converged);
  CHECK(back.doubling_deltas == table.doubling_deltas);
  CHECK_THROWS_AS(kernel_table_from_parts(to_csv(table), nlohmann::json::object()), IoError);
}

TEST_CASE("atomic_write replaces files without leaving temporaries") {
  const fs::path dir = fresh_dir("atomic");
  const fs::path target = dir / "data.txt";
  atomic_write(target, "hello\n");
  CHECK(read_file(target) == "hello\n");
  atomic_write(target, "world\n");
  CHECK(read_file(target) == "world\n");
  CHECK_FALSE(fs::exists(dir / "data.txt.tmp"));
  CHECK_THROWS_AS(read_file(dir / "missing.txt"), IoError);
}

TEST_CASE("symbol specs parse into working symbols") {
  const Symbol r = parse_symbol_spec("riesz:j=1", 1);
  CHECK(r.dim() == 1);
  CHECK(std::abs(r(xi_point(0.25))) == doctest::Approx(0.5));
  const Symbol cosine = parse_symbol_spec("sum(exp:k=1,exp:k=-1)", 1);
  CHECK(cosine(xi_point(1.0 / 6.0)).real() == doctest::Approx(1.0));
  CHECK(std::abs(parse_symbol_spec("notch:a=0.5,eps=0.1", 1)(xi_point(0.5))) <= 1e-15);
  const Symbol c = parse_symbol_spec("constant:re=2,im=-1", 2);
  CHECK(c(xi_point(0.1, 0.2)) == Complex(2, -1));
}

TEST_CASE("bad symbol specs name the problem") {
  CHECK_THROWS_WITH_AS(parse_symbol_spec("frobnicate", 1),
                       doctest::Contains("unknown symbol"), ConfigError);
  CHECK_THROWS_AS(parse_symbol_spec("riesz:j=3", 2), ConfigError);
  CHECK_THROWS_WITH_AS(parse_symbol_spec("interval:a=0.2,b=0.7", 2),
                       doctest::Contains("one-dimensional"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_symbol_spec("riesz:j=1,zz=2", 1),
                       doctest::Contains("unknown parameter"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_symbol_spec("exp:k=abc", 1),
                       doctest::Contains("malformed"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_symbol_spec("exp", 1),
                       doctest::Contains("needs parameter"), ConfigError);
}

TEST_CASE("minimal kernel config gets the documented defaults") {
  const ExperimentConfig c =
      parse_config(R"({"command":"kernel","symbol":"exp:k=3","box":6})");
  CHECK(c.command == "kernel");
  CHECK(c.dim == 1);
  CHECK(c.tol == 1e-8);
  CHECK(c.out == ".");
  CHECK(c.box == 6);
  CHECK(c.cap == 0);
  CHECK_FALSE(c.accept_at_cap);
  CHECK_FALSE(c.has_seed);
}

TEST_CASE("configs are validated strictly") {
  CHECK_THROWS_WITH_AS(parse_config("not json"), doctest::Contains("valid JSON"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"command":"dance"})"),
                       doctest::Contains("unknown command"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"command":"kernel","symbol":"exp:k=3","box":6,"boxx":6})"),
      doctest::Contains("boxx"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"command":"kernel","symbol":"exp:k=3","box":0})"),
                       doctest::Contains("box"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"command":"kernel","symbol":"exp:k=3","box":6,"tol":"big"})"),
      doctest::Contains("tol"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"command":"kernel","box":6})"),
                       doctest::Contains("symbol"), ConfigError);
  // norm and strichartz insist on a seed so reports are reproducible
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"command":"norm","symbol":"riesz:j=1","p":"2","q":"2","box":4})"),
      doctest::Contains("seed"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"command":"strichartz","p":"2","q":"2","t":1.0})"),
      doctest::Contains("seed"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"command":"wave","times":[0.5],"window":8,"f":"random"})"),
      doctest::Contains("seed"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"command":"wave","times":[0.5],"window":8,"f":"bogus"})"),
      doctest::Contains("f"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"command":"verify-hormander","symbol":"exp:k=3","box":8,"shift_cap":2,"R":3})"),
      doctest::Contains("R"), ConfigError);
}

TEST_CASE("wave config defaults") {
  const ExperimentConfig c = parse_config(R"({"command":"wave","times":[0.5],"window":8})");
  CHECK(c.f == "delta");
  CHECK(c.g == "zero");
  CHECK(c.support == 4);
  CHECK(c.times == std::vector<double>{0.5});
}

TEST_CASE("serialize and parse are mutually inverse") {
  for (const std::string text : {
           R"({"command":"kernel","symbol":"riesz:j=1","box":12,"tol":1e-9,"cap":4096})",
           R"({"command":"norm","symbol":"riesz:j=1","p":"1.5","q":"4","box":4,)"
           R"("trials":8,"seed":99})",
           R"({"command":"verify-mikhlin","symbol":"riesz:j=1","order":3,"scheme":"fd"})",
           R"({"command":"wave","d":2,"times":[0.0,1.5],"window":10,"f":"random","g":"zero",)"
           R"("seed":5,"support":2})",
       }) {
    const ExperimentConfig c = parse_config(text);
    const std::string s1 = serialize_config(c).dump();
    const std::string s2 = serialize_config(parse_config(s1)).dump();
    CHECK(s2 == s1);
  }
}

TEST_CASE("the kernel command writes the table and a versioned envelope") {
  const fs::path dir = fresh_dir("kernel-cmd");
  const ExperimentConfig cfg =
      parse_config(R"({"command":"kernel","symbol":"exp:k=3","box":6})");
  RunOptions run;
  run.out_dir = dir;
  run.quiet = true;
  CHECK(run_experiment(cfg, run) == 0);

  const GridFunction k = grid_function_from_csv(read_file(dir / "kernel.csv"));
  CHECK(k.box().lo(0) == -6);
  CHECK(k.box().hi(0) == 6);
  CHECK(std::abs(k.value_at(point(3)) - Complex(1, 0)) <= 1e-12);
  CHECK(std::abs(k.value_at(point(0))) <= 1e-12);

  const nlohmann::json envelope = nlohmann::json::parse(read_file(dir / "kernel.json"));
  CHECK(envelope["library_version"] == kVersion);
  CHECK(envelope["seed"].is_null());
  CHECK(envelope["config"]["command"] == "kernel");
  CHECK(envelope["config"]["symbol"] == "exp:k=3");
  CHECK(envelope["report"]["csv"] == "kernel.csv");
  CHECK(envelope["report"]["converged"] == true);
  CHECK(envelope["wall_clock_seconds"].is_number());
  fs::remove_all(dir);
}

TEST_CASE("the apply command reproduces the library call on a csv input") {
  const fs::path dir = fresh_dir("apply-cmd");
  detail::Rng rng(2024);
  const LatticeBox support = LatticeBox::centered(1, 2);
  CVector v(support.cardinality());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  const GridFunction f(support, v);
  atomic_write(dir / "input.csv", to_csv(f));

  nlohmann::json j{{"command", "apply"},
                   {"symbol", "laplacian"},
                   {"input", (dir / "input.csv").string()},
                   {"window", 8}};
  RunOptions run;
  run.out_dir = dir;
  run.quiet = true;
  CHECK(run_experiment(parse_config(j.dump()), run) == 0);

  const GridFunction got = grid_function_from_csv(read_file(dir / "apply.csv"));
  const GridFunction expected =
      apply_multiplier(symbols::laplacian(1), f, LatticeBox::centered(1, 8), 1e-8);
  CHECK(max_abs_difference(got, expected) == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("norm reports are identical across reruns with the same seed") {
  const std::string text =
      R"({"command":"norm","symbol":"riesz:j=1","p":"2","q":"2","box":4,"trials":4,"seed":77})";
  RunOptions run;
  run.quiet = true;
  run.out_dir = fresh_dir("norm-a");
  REQUIRE(run_experiment(parse_config(text), run) == 0);
  const nlohmann::json a = nlohmann::json::parse(read_file(run.out_dir / "norm.json"));
  fs::remove_all(run.out_dir);

  run.out_dir = fresh_dir("norm-b");
  REQUIRE(run_experiment(parse_config(text), run) == 0);
  const nlohmann::json b = nlohmann::json::parse(read_file(run.out_dir / "norm.json"));
  fs::remove_all(run.out_dir);

  CHECK(a["report"].dump() == b["report"].dump());
  CHECK(a["seed"] == 77);
  CHECK(a["report"]["spectral"] == true);
}

TEST_CASE("run_experiment maps failures to its exit codes") {
  RunOptions run;
  run.quiet = true;
  run.out_dir = fresh_dir("exit-codes");

  // numerical non-convergence: a slowly decaying kernel under a tiny cap
  const ExperimentConfig stuck = parse_config(
      R"({"command":"kernel","symbol":"negpower:r=0.5","box":6,"tol":1e-12,"cap":1024})");
  CHECK(run_experiment(stuck, run) == 3);

  // config error surfacing at dispatch: input dimension contradicts the config
  const LatticeBox support = LatticeBox::centered(2, 1);
  GridFunction f2 = GridFunction::zero(support);
  atomic_write(run.out_dir / "input2d.csv", to_csv(f2));
  nlohmann::json j{{"command", "apply"},
                   {"symbol", "laplacian"},
                   {"input", (run.out_dir / "input2d.csv").string()},
                   {"window", 4}};
  CHECK(run_experiment(parse_config(j.dump()), run) == 2);

  // I/O error: the input file does not exist
  j["input"] = (run.out_dir / "no-such-file.csv").string();
  CHECK(run_experiment(parse_config(j.dump()), run) == 4);
  fs::remove_all(run.out_dir);
}
