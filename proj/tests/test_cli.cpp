#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slopeforge/cli.hpp"

using namespace slopeforge;

namespace {

json jdoc(const std::string& text) { return json::parse(text); }

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const kernel_error& e) {
    return e.code();
  }
  FAIL("expected a kernel_error");
  return errc::verification_failed;
}

}  // namespace

TEST_CASE("polynomial literal grammar") {
  CHECK(cli_detail::parse_poly("0").empty());
  CHECK(cli_detail::parse_poly("1 + 3*u^2 - 1/2*u^5") ==
        QPoly{Rat(1), Rat(0), Rat(3), Rat(0), Rat(0), Rat(-1, 2)});
  CHECK(cli_detail::parse_poly("  u * u ") == QPoly{Rat(0), Rat(0), Rat(1)});
  CHECK(cli_detail::parse_poly("-u + u") == QPoly{});
  CHECK(cli_detail::parse_poly("2^3") == QPoly{Rat(8)});
  CHECK(cli_detail::parse_rat("-7/4") == Rat(-7, 4));

  for (const char* bad : {"u^^2", "1 +", "3//4", "u u", "1/0", ""}) {
    try {
      cli_detail::parse_poly(bad);
      FAIL("accepted malformed literal ", bad);
    } catch (const kernel_error& e) {
      CHECK(e.code() == errc::parse_error);
      CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
  }
  // The column in the message points at the offending character.
  try {
    cli_detail::parse_poly("u^^2");
  } catch (const kernel_error& e) {
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
  }
  CHECK(code_of([] { cli_detail::parse_rat("u^2"); }) == errc::parse_error);
}

TEST_CASE("schema errors name the offending path") {
  CHECK(code_of([] {
          run_command("pos", jdoc(R"({"ring": {"kind": "u"}})"), {});
        }) == errc::schema_error);
  try {
    run_command("pos", jdoc(R"({"ring": {"kind": "u"}})"), {});
  } catch (const kernel_error& e) {
    CHECK(std::string(e.what()).find("ring.p") != std::string::npos);
  }
  CHECK(code_of([] { run_command("pos", jdoc("{}"), {}); }) == errc::schema_error);
  CHECK(code_of([] {
          run_command("newton",
                      jdoc(R"({"ring": {"kind": "u", "p": 2},
                               "object": {"kind": "isocrystal", "payload": {"b": [["1"]]}}})"),
                      {});
        }) == errc::schema_error);
  CHECK(code_of([] { parse_document("{ not json"); }) == errc::parse_error);
  CHECK(code_of([] { run_command("frobnicate", jdoc("{}"), {}); }) == errc::schema_error);
}

TEST_CASE("pos and type reports") {
  Report t = run_command(
      "type", jdoc(R"({"object": {"kind": "types", "payload": {"entries": ["1/2", -1, 2]}}})"),
      {});
  CHECK(t.lines[0] == "type: (2, 1/2, -1)");
  CHECK(t.lines[1] == "degree: 3/2");

  Report r = run_command("pos",
                         jdoc(R"({"ring": {"kind": "p", "p": 2},
                                  "object": {"kind": "lattice_pair",
                                             "payload": {"m1": [[1, 0], [0, 1]],
                                                         "m2": [[4, 0], [0, "1/2"]]}}})"),
                         {});
  CHECK(r.lines[0] == "pos: (1, -2)");
  CHECK(r.lines[1] == "nu: -1");

  Report u = run_command("pos",
                         jdoc(R"({"ring": {"kind": "u", "p": 2},
                                  "object": {"kind": "lattice_pair",
                                             "payload": {"m1": [[1, 0], [0, 1]],
                                                         "m2": [["u^3", 0], [0, 1]]}}})"),
                         {});
  CHECK(u.lines[0] == "pos: (0, -3)");

  Report e = run_command("pos",
                         jdoc(R"({"ring": {"kind": "eisenstein", "p": 2},
                                  "eisenstein": [-2, 0, 1],
                                  "object": {"kind": "lattice_pair",
                                             "payload": {"m1": [[1]],
                                                         "m2": [["u^2 - 2"]]}}})"),
                         {});
  CHECK(e.lines[0] == "pos: (-1)");
}

TEST_CASE("hn, newton, mazur, xmu, wa, phicris and abelian reports") {
  Report hn = run_command("hn",
                          jdoc(R"({"ring": {"kind": "u", "p": 2, "u_precision": 6},
                                   "object": {"kind": "phimodule",
                                              "payload": {"matrix": [["u", 0], [0, "u^3"]]}}})"),
                          {});
  CHECK(hn.lines[0] == "t_H: (-1, -3)");
  CHECK(hn.lines[1] == "t_F1: (-1, -3)");
  CHECK(hn.certificate.find("N_u=6") != std::string::npos);

  Report nw = run_command("newton",
                          jdoc(R"({"ring": {"kind": "p", "p": 2},
                                   "object": {"kind": "isocrystal",
                                              "payload": {"b": [[0, 2], [1, 0]]}}})"),
                          {});
  CHECK(nw.lines[0] == "(1/2, 1/2)");
  CHECK(nw.lines[1] == "kottwitz: 1");

  Report mz = run_command("mazur",
                          jdoc(R"({"ring": {"kind": "p", "p": 2},
                                   "object": {"kind": "isocrystal",
                                              "payload": {"b": [[1, 0], [0, 2]],
                                                          "lattice": [[1, 0], [0, 1]]}}})"),
                          {});
  CHECK(mz.lines[2] == "mazur: true");

  Report xm = run_command("xmu",
                          jdoc(R"({"ring": {"kind": "p", "p": 2},
                                   "object": {"kind": "isocrystal",
                                              "payload": {"b": [[1, 0], [0, 2]],
                                                          "mu": [0, -1]}},
                                   "options": {"bounds": 2}})"),
                          {});
  CHECK(xm.lines[1] == "nonempty: true");
  CHECK(xm.lines[2] == "criterion: true");
  CHECK(xm.lines[3] == "mu-ordinary: true");

  Report wa = run_command(
      "wa",
      jdoc(R"({"ring": {"kind": "p", "p": 2},
               "object": {"kind": "filtered",
                          "payload": {"b": [[1, 0], [0, 2]],
                                      "flag": {"breaks": [1, 0],
                                               "steps": [[[0, 1]], [[1, 0], [0, 1]]]}}}})"),
      {});
  CHECK(wa.lines[1] == "weakly admissible: true");
  CHECK(wa.lines[2] == "fargues slopes: (0, -1)");

  Report pc = run_command("phicris",
                          jdoc(R"({"ring": {"kind": "p", "p": 2},
                                   "object": {"kind": "isocrystal",
                                              "payload": {"b": [[1, 0], [0, 2]],
                                                          "lattice": [[1, 0], [0, 1]],
                                                          "s_power": 1}}})"),
                          {});
  CHECK(pc.lines[1] == "  [1, 0]");
  CHECK(pc.lines[2] == "  [0, 2]");

  Report ab = run_command(
      "abelian",
      jdoc(R"({"object": {"kind": "abelian",
                          "payload": {"size": 2, "iota0": 0,
                                      "weights": [[1, 0], [0, 1]]}}})"),
      {});
  CHECK(ab.lines[0] == "t_H: (1, 0)");
  CHECK(ab.lines[1] == "t_N: (1/2, 1/2)");
  CHECK(ab.lines[2] == "ordinary: true");
}

TEST_CASE("kisin reports and certificates") {
  const std::string base = R"({"ring": {"kind": "kisin", "p": 2, "u_precision": 7},
                               "eisenstein": [-2, 1],
                               "object": {"kind": "kisin",
                                          "payload": {"matrix": [["u - 2", 0], [2, "u^3 - 6*u^2 + 12*u - 8"]]}},
                               "options": {"n_max": 2}})";
  CliOptions opts;
  Report poly = run_command("kisin polygon", jdoc(base), opts);
  CHECK(poly.series.size() == 3);
  CHECK(poly.series[0].name == "t_H");
  CHECK(poly.certificate == "N_u=7, n_max=2");

  opts.n = 1;
  Report p1 = run_command("kisin polygon", jdoc(base), opts);
  CHECK(p1.series.size() == 2);
  CHECK(p1.series.back().name == "t_F1");

  Report lim = run_command("kisin limit", jdoc(base), {});
  CHECK(lim.series.back().name == "t_F_limit");
  CHECK(lim.series.back().poly.value_end() == lim.series[1].poly.value_end());

  Report th = run_command("kisin theta", jdoc(base), {});
  CHECK(th.lines[0].rfind("k0: ", 0) == 0);

  Report dec = run_command("kisin decompose", jdoc(base), {});
  CHECK(dec.lines[0].rfind("steps: ", 0) == 0);
  CHECK(dec.lines[3].rfind("flag slopes: ", 0) == 0);
}

TEST_CASE("emitters are deterministic and well-formed") {
  const json doc = jdoc(R"({"ring": {"kind": "p", "p": 2},
                            "object": {"kind": "isocrystal",
                                       "payload": {"b": [[1, 0], [0, 4]]}}})");
  Report r = run_command("newton", doc, {});

  std::string text = emit(r, "text");
  CHECK(text == "(2, 0)\nkottwitz: 2\ncertificate: exact\n");

  std::string csv = emit(r, "csv");
  CHECK(csv == "x,y,series\n0,0,t_N\n1,2,t_N\n2,2,t_N\n");

  std::string svg = emit(r, "svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") !=
        std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("t_N</text>") != std::string::npos);

  // Byte stability across repeated runs of the same request.
  Report r2 = run_command("newton", doc, {});
  CHECK(emit(r2, "text") == text);
  CHECK(emit(r2, "csv") == csv);
  CHECK(emit(r2, "svg") == svg);

  CHECK(code_of([&] { emit(r, "yaml"); }) == errc::schema_error);
}

TEST_CASE("batch requests keep input order") {
  json batch = json::array();
  batch.push_back(jdoc(R"({"ring": {"kind": "p", "p": 2},
                           "object": {"kind": "isocrystal", "payload": {"b": [[2]]}}})"));
  batch.push_back(jdoc(R"({"ring": {"kind": "p", "p": 2},
                           "object": {"kind": "isocrystal", "payload": {"b": [[1]]}}})"));
  Report r = run_document("newton", batch, {});
  CHECK(r.lines[0] == "[0] (1)");
  CHECK(r.lines[2] == "[1] (0)");
  CHECK(r.series[0].name == "[0] t_N");
  CHECK(r.series[1].name == "[1] t_N");

  std::string csv = emit(r, "csv");
  CHECK(csv.find("[0] t_N") < csv.find("[1] t_N"));

  // Kernel errors surface verbatim and are distinguishable from input errors.
  json bad = jdoc(R"({"ring": {"kind": "p", "p": 2},
                      "object": {"kind": "isocrystal", "payload": {"b": [[0]]}}})");
  CHECK(code_of([&] { run_document("newton", bad, {}); }) == errc::not_full_rank);
}
