#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "liesym/serialize.hpp"
#include "support.hpp"

using namespace liesym;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path root;

  explicit Workspace(const std::string& name) : root(fs::temp_directory_path() / ("liesym-cli-" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }

  void write(const std::string& file, const std::string& text) const { std::ofstream(root / file) << text; }

  /// Exit status of `liesym <args>`; stdout and stderr go to files in the workspace.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + LIESYM_CLI_PATH + "\" " + args + " >\"" + (root / "stdout").string() +
                            "\" 2>\"" + (root / "stderr").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  int run_config(const std::string& command, const std::string& config) const {
    write("config.json", config);
    return run(command + " --config \"" + (root / "config.json").string() + "\" --out \"" + (root / "out").string() +
               "\"");
  }

  /// The single run directory under out/.
  fs::path run_dir() const {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root / "out")) dirs.push_back(e.path());
    REQUIRE(dirs.size() == 1);
    return dirs.front();
  }

  Json json(const std::string& file) const { return Json::parse(std::ifstream(run_dir() / file)); }

  std::string first_line(const std::string& file) const {
    std::ifstream in(run_dir() / file);
    std::string line;
    std::getline(in, line);
    return line;
  }
};

}  // namespace

TEST_CASE("cli: enforce writes a basis with provenance") {
  const Workspace ws("enforce");
  const int code = ws.run_config("enforce", R"({"command": "enforce", "seed": 1,
      "group": {"kind": "SO", "n": 2}, "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2}})");
  REQUIRE(code == 0);
  const Json basis = ws.json("basis.json");
  CHECK(basis["provenance"]["config_hash"] == ws.run_dir().filename().string());
  CHECK(basis["provenance"]["command"] == "enforce");
  CHECK(basis["basis"]["columns"].size() == 2);
  CHECK(ws.first_line("residuals.csv").rfind("# config_hash=", 0) == 0);
}

TEST_CASE("cli: discover on a model and on a point cloud") {
  const Workspace ws("discover");
  // |x|^2 over P_2(R^3): monomials 1, x, y, z, x^2, xy, xz, y^2, yz, z^2.
  REQUIRE(ws.run_config("discover", R"({"command": "discover", "group": {"kind": "SE", "n": 3},
      "dictionary": {"type": "poly", "m": 3, "n": 1, "d": 2},
      "coefficients": [0, 0, 0, 0, 1, 0, 0, 1, 0, 1]})") == 0);
  CHECK(ws.json("report.json")["report"]["nullity"] == 3);
  CHECK(ws.first_line("spectrum.csv").rfind("# config_hash=", 0) == 0);

  const Workspace pc("pointcloud");
  std::ostringstream csv;
  csv << "x,y\n" << std::setprecision(17);
  for (int i = 0; i < 200; ++i) {
    const double t = 2 * std::numbers::pi * i / 200.0;
    csv << 0.5 + std::cos(t) << ',' << std::sin(t) << '\n';
  }
  pc.write("circle.csv", csv.str());
  REQUIRE(pc.run_config("discover", R"({"command": "discover", "source": "pointcloud",
      "group": {"kind": "SE", "n": 2}, "points_csv": "circle.csv", "intrinsic_dim": 1, "neighbors": 6})") == 0);
  CHECK(pc.json("report.json")["report"]["nullity"] == 1);
}

TEST_CASE("cli: configuration problems exit with 2") {
  const Workspace ws("errors");
  CHECK(ws.run_config("enforce", R"({"command": "enforce", "group": {"kind": "SO", "n": 2},
      "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2}, "colour": "blue"})") == 2);
  CHECK(ws.run_config("discover", R"({"command": "enforce", "group": {"kind": "SO", "n": 2},
      "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2}})") == 2);
  CHECK(ws.run_config("enforce", "{ not json") == 2);
  CHECK(ws.run_config("fit", R"({"command": "fit", "data_csv": "absent.csv", "gamma": 0.1,
      "group": {"kind": "SE", "n": 2}, "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2}})") == 2);
  CHECK(ws.run("enforce") == 2);
  CHECK(ws.run("") == 2);
  CHECK(ws.run("--help") == 0);
}

TEST_CASE("cli: an unconverged fit exits with 3") {
  const Workspace ws("fit");
  std::ostringstream csv;
  csv << "x1,x2,y\n";
  Rng rng(3);
  for (int j = 0; j < 30; ++j) {
    const VectorXd x = rng.uniform_vector(2, -1, 1);
    csv << x[0] << ',' << x[1] << ',' << x.squaredNorm() + 0.1 * x[0] + 0.05 * rng.normal() << '\n';
  }
  ws.write("data.csv", csv.str());
  const std::string base = R"("command": "fit", "data_csv": "data.csv", "gamma_grid": [0.01, 0.1],
      "group": {"kind": "SE", "n": 2}, "dictionary": {"type": "poly", "m": 2, "n": 1, "d": 2})";
  CHECK(ws.run_config("fit", "{" + base + ", \"solver\": {\"max_iter\": 1}}") == 3);
  fs::remove_all(ws.root / "out");
  REQUIRE(ws.run_config("fit", "{" + base + "}") == 0);
  const Json fit = ws.json("fit.json");
  CHECK(fit["fits"].size() == 2);
  CHECK(ws.first_line("path.csv").rfind("# config_hash=", 0) == 0);
}
