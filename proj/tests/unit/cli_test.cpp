#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mahler/cli/command.hpp"
#include "mahler/cli/system_file.hpp"
#include "mahler/exact/errors.hpp"

using namespace mahler;
using Json = nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SystemFile catalog(const std::string& name) {
  return parse_system_file(slurp(std::filesystem::path(MAHLER_CATALOG_DIR) / name));
}

std::vector<std::filesystem::path> catalog_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(MAHLER_CATALOG_DIR))
    if (e.path().extension() == ".msys") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

Report run(const std::string& file, Command cmd) {
  cmd.file_label = file;
  return run_command(cmd, catalog(file));
}

Json report_json(const Report& r) { return Json::parse(r.json); }

// Location of a ParseError as (line, column); (0, 0) when nothing is thrown.
std::pair<std::size_t, std::size_t> parse_error_at(const std::string& text) {
  try {
    parse_system_file(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

const std::string kHead = "# mahler-system v1\n";

}  // namespace

TEST(SystemFile, FredholmFixture) {
  SystemFile f = catalog("fredholm.msys");
  ASSERT_EQ(f.systems.size(), 1u);
  const MahlerSystem& s = f.system("fredholm").system;
  EXPECT_EQ(s.transform().to_string(), "[[2]]");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.matrix()(0, 0).to_string(), "1");
  EXPECT_TRUE(s.matrix()(0, 1).is_zero());
  EXPECT_EQ(s.matrix()(1, 0).to_string(), "z");
  EXPECT_EQ(s.matrix()(1, 1).to_string(), "1");
  EXPECT_EQ(f.point("half").point.to_string(), "(1/2)");
  EXPECT_EQ(f.settings.order, 16);
}

TEST(SystemFile, RowLengthMismatchIsLocated) {
  const std::string text = kHead + "[system s]\nvars = a, b\nT = [[1, 2, 3], [1, 1]]\nA[0][0] = 1\n";
  auto [line, col] = parse_error_at(text);
  EXPECT_EQ(line, 4u);
  EXPECT_EQ(col, 6u);
  try {
    parse_system_file(text);
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("dimension"), std::string::npos);
  }
}

TEST(SystemFile, Diagnostics) {
  EXPECT_EQ(parse_error_at("[system s]\n").first, 1u);
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nfoo = 1\n"), std::make_pair(4ul, 1ul));
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nvars = z\n").first, 4u);
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nT = [[2]]\nA[0][0] = 1\n[system s]\n")
                .first,
            6u);
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nT = [[2]]\nA[0][0] = 1 +\n").first, 5u);
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nT = [[2]]\nA[0][0] = y\n"),
            std::make_pair(5ul, 11ul));
  EXPECT_EQ(parse_error_at(kHead + "[point p]\ncoords = 1/2, x\n"), std::make_pair(3ul, 15ul));
  EXPECT_EQ(parse_error_at(kHead + "[point p]\ncoords = 0\n").first, 3u);
  EXPECT_EQ(parse_error_at(kHead + "[settings]\nprec = abc\n"), std::make_pair(3ul, 8ul));
  EXPECT_EQ(parse_error_at(kHead + "[widget w]\n").first, 2u);
  // T size against the variable count, f0 against A.
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nT = [[1,0],[0,1]]\nA[0][0] = 1\n").first,
            4u);
  EXPECT_EQ(
      parse_error_at(kHead + "[system s]\nvars = z\nT = [[2]]\nA[0][0] = 1\nA[1][1] = 1\nf0 = 1\n")
          .first,
      6u);
  EXPECT_EQ(parse_error_at(kHead + "[system s]\nvars = z\nT = [[2]]\nA[0][0] = 1\n"),
            std::make_pair(0ul, 0ul));
}

TEST(SystemFile, SingularSystemRejected) {
  EXPECT_NE(parse_error_at(kHead + "[system s]\nvars = z\nT = [[2]]\nA[0][0] = 0\n").first, 0u);
}

TEST(SystemFile, CatalogRoundTrip) {
  const auto files = catalog_files();
  ASSERT_GE(files.size(), 5u);
  for (const auto& path : files) {
    SCOPED_TRACE(path.string());
    SystemFile f = parse_system_file(slurp(path));
    const std::string printed = print_system_file(f);
    SystemFile g = parse_system_file(printed);
    EXPECT_TRUE(same_structure(f, g));
    EXPECT_EQ(print_system_file(g), printed);
  }
}

TEST(SystemFile, RandomRoundTrip) {
  std::mt19937 rng(7);
  const char* atoms[] = {"1", "2", "-3/4", "z1", "z2", "z1*z2", "z1^2", "(1 - z1)", "1/(1 + z2)"};
  for (int iter = 0; iter < 40; ++iter) {
    const int m = 1 + static_cast<int>(rng() % 3);
    std::ostringstream os;
    os << kHead << "[settings]\norder = " << 1 + rng() % 20 << "\n[system r" << iter
       << "]\nvars = z1, z2\nT = [[" << 1 + rng() % 3 << ", " << rng() % 2 << "], [" << rng() % 2
       << ", " << 1 + rng() % 3 << "]]\n";
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i == j)
          os << "A[" << i << "][" << j << "] = 1 + " << atoms[rng() % 9] << "*z1\n";
        else if (rng() % 2)
          os << "A[" << i << "][" << j << "] = " << atoms[rng() % 9] << " - " << atoms[rng() % 9]
             << "\n";
      }
    os << "f0 =";
    for (int i = 0; i < m; ++i) os << (i ? ", " : " ") << (i == 0 ? "1" : "0");
    os << "\n[point p]\ncoords = " << 1 + rng() % 5 << "/" << 7 + rng() % 5 << ", -1/"
       << 2 + rng() % 9 << "\n";
    SystemFile f = parse_system_file(os.str());
    SystemFile g = parse_system_file(print_system_file(f));
    EXPECT_TRUE(same_structure(f, g)) << os.str();
  }
}

TEST(Command, ClassMFib) {
  Command c{.name = "check class-m", .systems = {"fib"}};
  Report r = run("fib.msys", c);
  EXPECT_EQ(r.status, 0);
  Json j = report_json(r);
  EXPECT_EQ(j["verdict"], "true");
  EXPECT_EQ(j["evidence"]["systems"][0]["in_class_m"], true);
  EXPECT_EQ(j["format"], kReportFormat);
}

TEST(Command, ClassMNegative) {
  Command c{.name = "check class-m", .systems = {"diag23"}};
  Report r = run("diag23.msys", c);
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(report_json(r)["evidence"]["systems"][0]["in_class_m"], false);
}

TEST(Command, AdmissibleWitness) {
  Command c{.name = "check admissible", .systems = {"diag22"}, .points = {"p"}};
  Report r = run("diag22.msys", c);
  EXPECT_EQ(r.status, 1);
  Json ind = report_json(r)["evidence"]["t_independent"];
  EXPECT_EQ(ind["kind"], "dependent");
  EXPECT_EQ(ind["mu"], Json::array({"2", "-1"}));
  EXPECT_EQ(ind["orbit_checks_passed"], ind["orbit_checks"]);

  Command ok{.name = "check admissible", .systems = {"diag22"}, .points = {"q"}};
  EXPECT_EQ(run("diag22.msys", ok).status, 0);
}

TEST(Command, EvalFredholm) {
  Command c{.name = "eval", .systems = {"fredholm"}, .points = {"half"}, .digits = 30};
  Report r = run("fredholm.msys", c);
  EXPECT_EQ(r.status, 0);
  Json v = report_json(r)["evidence"]["values"][1];
  EXPECT_EQ(v["value"], "8.16421509021893143708079737531e-1");
  EXPECT_GE(v["precision"].get<long>(), 100);
  EXPECT_EQ(report_json(r)["evidence"]["values"][0]["exact"], "1");
}

TEST(Command, EvalToleranceNotReached) {
  Command c{.name = "eval", .systems = {"fredholm"}, .points = {"half"}, .digits = 400,
            .k_max = 4};
  EXPECT_EQ(run("fredholm.msys", c).status, 2);
}

TEST(Command, GaugeAndRegularity) {
  Command g{.name = "check gauge", .systems = {"thue-morse"}, .order = 32};
  EXPECT_EQ(run("thue-morse.msys", g).status, 0);
  Command rp{.name = "check regular-point", .systems = {"fib"}, .points = {"p"}};
  EXPECT_EQ(run("fib.msys", rp).status, 0);
}

TEST(Command, Relations) {
  Command c{.name = "relations", .systems = {"fredholm"}, .points = {"half", "quarter"},
            .digits = 60};
  Report r = run("fredholm.msys", c);
  ASSERT_EQ(r.status, 0) << r.text;
  Json rels = report_json(r)["evidence"]["relations"];
  ASSERT_EQ(rels.size(), 1u);
  EXPECT_EQ(rels[0]["coefficients"], Json::array({"2", "-2", "-1"}));

  Command none{.name = "relations", .systems = {"fredholm2", "fredholm3"}, .points = {"half"}};
  EXPECT_EQ(run("bases.msys", none).status, 2);
}

TEST(Command, LiftAndPurity) {
  Command lift{.name = "lift", .systems = {"kron-square"}, .points = {"half"},
               .relation = "X0*X2 - X1^2"};
  Report r = run("kron-square.msys", lift);
  ASSERT_EQ(r.status, 0) << r.text;
  Json ev = report_json(r)["evidence"];
  EXPECT_EQ(ev["specialization_exact"], true);
  EXPECT_EQ(ev["functional_vanishing_exact"], true);
  EXPECT_EQ(ev["verified_order"], 64);

  Command pure{.name = "purity", .systems = {"kron-square"}, .degree = 2,
               .relation = "X2*X0 - X1^2", .generators = {"0:X0*X2 - X1^2"}};
  EXPECT_EQ(run("kron-square.msys", pure).status, 0);
  Command miss{.name = "purity", .systems = {"kron-square"}, .degree = 2, .relation = "X1 - X2"};
  EXPECT_EQ(run("kron-square.msys", miss).status, 2);
}

TEST(Command, SequencesAndProbe) {
  Command it{.name = "iterate-vectors", .systems = {"fredholm2", "fredholm3"}, .l_max = 50};
  Report r = run("bases.msys", it);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(report_json(r)["evidence"]["entries"].size(), 50u);

  Command th{.name = "theta", .systems = {"fredholm2", "fredholm3"}};
  EXPECT_EQ(run("bases.msys", th).status, 0);

  Command pr{.name = "probe", .systems = {"fredholm2", "fredholm3"}, .points = {"half", "half"},
             .l_max = 10, .series = "z - w"};
  Report p = run("bases.msys", pr);
  EXPECT_EQ(p.status, 0) << p.text;
}

TEST(Command, KronPower) {
  Command c{.name = "kron-power", .systems = {"fredholm"}, .power = 2};
  Report r = run("fredholm.msys", c);
  EXPECT_EQ(r.status, 0);
  Json ev = report_json(r)["evidence"];
  EXPECT_EQ(ev["size"], 4);
  EXPECT_EQ(ev["det_identity_exact"], true);
  // The emitted section is itself a valid system file.
  SystemFile f = parse_system_file(kHead + ev["system"].get<std::string>());
  EXPECT_EQ(f.systems[0].system.size(), 4u);
}

TEST(Command, InputErrors) {
  EXPECT_EQ(run("fib.msys", {.name = "eval", .systems = {"nope"}, .points = {"p"}}).status, 3);
  EXPECT_EQ(run("fib.msys", {.name = "frobnicate"}).status, 3);
  EXPECT_EQ(run("fib.msys", {.name = "eval", .systems = {"fib"}, .points = {}}).status, 3);
  Report r = run("fredholm.msys", {.name = "eval", .systems = {"fredholm"}, .points = {"nope"}});
  EXPECT_EQ(report_json(r)["verdict"], "input_error");
}

TEST(Command, PrintIsNormalizedFile) {
  SystemFile f = catalog("fib.msys");
  Report r = run_command({.name = "print"}, f);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.text, print_system_file(f));
}

TEST(Command, ReportsAreDeterministic) {
  Command c{.name = "relations", .systems = {"fredholm"}, .points = {"half", "quarter"}};
  Report a = run("fredholm.msys", c);
  Report b = run("fredholm.msys", c);
  EXPECT_EQ(a.json, b.json);
}
