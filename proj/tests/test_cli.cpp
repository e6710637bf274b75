#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "posmat/io.hpp"
#include "posmat/realize.hpp"

using namespace posmat;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "posmat-cli-test";

int run(const std::string& args) {
  const std::string cmd = std::string(POSMAT_CLI) + " " + args + " > " + (kWork / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string output() {
  std::ifstream in(kWork / "stdout.txt");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string at(const std::string& name) { return (kWork / name).string(); }

void write(const std::string& name, const std::string& text) { std::ofstream(kWork / name) << text; }

}  // namespace

TEST_CASE("command line contract") {
  fs::remove_all(kWork);
  fs::create_directories(kWork);

  CHECK(run("--version") == 0);
  CHECK(output().find("posmat-condorcet-report/1") != std::string::npos);
  CHECK(run("") == 2);
  CHECK(run("sample --model nosuch --m 3 --n 2") == 2);

  REQUIRE(run("sample --model ic --m 4 --n 6 --seed 9 -o " + at("a.elec")) == 0);
  const Election a = load_election(at("a.elec"));
  CHECK(a.n() == 6);
  REQUIRE(run("sample --model ic --m 4 --n 6 --seed 9 -o " + at("b.elec")) == 0);
  CHECK(load_election(at("b.elec")).votes() == a.votes());

  REQUIRE(run("matrix " + at("a.elec") + " -o " + at("a.pmx")) == 0);
  CHECK(load_position_matrix(at("a.pmx")) == position_matrix_of(a));

  REQUIRE(run("realize --mode count --matrix " + at("a.pmx")) == 0);
  CHECK(output() == count_realizations(position_matrix_of(a)).str() + "\n");
  REQUIRE(run("realize --mode uniform --seed 3 --matrix " + at("a.pmx") + " -o " + at("u.elec")) == 0);
  CHECK(position_matrix_of(load_election(at("u.elec"))) == position_matrix_of(a));
  REQUIRE(run("realize --mode enumerate --matrix " + at("a.pmx") + " -o " + at("all")) == 0);
  CHECK(std::distance(fs::directory_iterator(at("all")), fs::directory_iterator{}) ==
        static_cast<long>(count_realizations(position_matrix_of(a))));

  REQUIRE(run("distance --metric isoswap " + at("a.elec") + " " + at("u.elec")) == 0);
  REQUIRE(run("distance --metric positionwise " + at("a.elec") + " " + at("u.elec")) == 0);
  CHECK(output() == "0\n");
  CHECK(run("distance --metric isoswap " + at("a.pmx") + " " + at("u.elec")) == 2);

  // The four-vote example: single-peaked on c a b d, and nobody can win.
  write("ex.pmx", "2,2,0,0\n2,2,0,0\n0,0,2,2\n0,0,2,2\n");
  CHECK(run("recognize --family sp --matrix " + at("ex.pmx") + " --axis 2,0,1,3 --witness " + at("w.elec")) == 0);
  CHECK(FrequencyMatrix(position_matrix_of(load_election(at("w.elec")))) == load_frequency_matrix(at("ex.pmx")));
  CHECK(run("recognize --family gs-balanced --matrix " + at("ex.pmx")) == 0);
  write("un.pmx", "1,1,1\n1,1,1\n1,1,1\n");
  CHECK(run("recognize --family sp --matrix " + at("un.pmx")) == 3);
  CHECK(run("condorcet --matrix " + at("ex.pmx") + " --count-winners") == 3);
  CHECK(run("condorcet --matrix " + at("ex.pmx") + " --candidate 0 --check-condition") == 3);
  write("id.pmx", "3,0,0\n0,3,0\n0,0,3\n");
  CHECK(run("condorcet --matrix " + at("id.pmx") + " --candidate 0 --find-witness " + at("cw.elec")) == 0);
  CHECK(load_election(at("cw.elec")).votes() == std::vector<Vote>(3, identity_vote(3)));
  CHECK(run("condorcet --matrix " + at("id.pmx") + " --candidate 2") == 3);
  CHECK(run("condorcet --matrix " + at("id.pmx") + " --candidate 0 --check-condition") == 0);
  write("big.pmx", "1,1,1,1,1,1,1,1,1\n1,1,1,1,1,1,1,1,1\n1,1,1,1,1,1,1,1,1\n1,1,1,1,1,1,1,1,1\n"
                   "1,1,1,1,1,1,1,1,1\n1,1,1,1,1,1,1,1,1\n1,1,1,1,1,1,1,1,1\n1,1,1,1,1,1,1,1,1\n"
                   "1,1,1,1,1,1,1,1,1\n");
  CHECK(run("condorcet --matrix " + at("big.pmx") + " --count-winners") == 4);
  CHECK(run("realize --mode count --matrix " + at("big.pmx")) == 4);

  write("sets.txt", "0 1 2\n3 4 5\n0 3 4\n");
  REQUIRE(run("fixture x3c --universe 6 --sets " + at("sets.txt") + " -o " + at("fx")) == 0);
  CHECK(run("recognize --family explicit --matrix " + at("fx/matrix.pmx") + " --votes " + at("fx/domain.elec")) == 0);

  REQUIRE(run("dataset --preset 4x16 --seed 2 -o " + at("ds")) == 0);
  REQUIRE(run("map distances --dataset " + at("ds") + " -o " + at("d.csv")) == 0);
  REQUIRE(run("map embed " + at("d.csv") + " --seed 1 --restarts 2 -o " + at("c.csv")) == 0);
  REQUIRE(run("map render " + at("c.csv") + " " + at("ds/manifest.csv") + " -o " + at("m.svg")) == 0);
  CHECK(fs::file_size(at("m.svg")) > 1000);

  fs::remove_all(kWork);
}
