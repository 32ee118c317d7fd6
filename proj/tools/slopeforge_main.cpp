#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "slopeforge/cli.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) slopeforge::fail(slopeforge::errc::parse_error, "cannot open input file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slopeforge: polygon and filtration reports for slope-theoretic data"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string input;
  bool batch = false;
  slopeforge::CliOptions opts;
  long nmax = 0, search_degree = 0, bound = 0, level = 0;

  std::string command;
  auto add_common = [&](CLI::App* sub, const std::string& name) {
    sub->add_option("input", input, "JSON request file (default: stdin)");
    sub->add_option("--format", format, "output format: text, csv or svg");
    sub->add_option("--nmax", nmax, "tower depth for Kisin computations");
    sub->add_option("--search-degree", search_degree, "line-search degree bound");
    sub->add_option("--bound", bound, "lattice window bound");
    sub->add_flag("--batch", batch, "treat input as an array of requests");
    sub->callback([&command, name] { command = name; });
    return sub;
  };

  add_common(app.add_subcommand("type", "type-vector report"), "type");
  add_common(app.add_subcommand("pos", "relative position of two lattices"), "pos");
  add_common(app.add_subcommand("hn", "Fargues filtration of a torsion phi-module"), "hn");
  add_common(app.add_subcommand("newton", "Newton type and Kottwitz point"), "newton");
  add_common(app.add_subcommand("mazur", "Mazur inequality check"), "mazur");
  add_common(app.add_subcommand("xmu", "bounded lattice-set enumeration"), "xmu");
  add_common(app.add_subcommand("wa", "weak admissibility and Fargues flag"), "wa");
  add_common(app.add_subcommand("phicris", "crystalline Frobenius on a lattice"), "phicris");
  add_common(app.add_subcommand("abelian", "abelian cocharacter ordinarity"), "abelian");

  auto* kisin = app.add_subcommand("kisin", "Kisin-module polygon tower");
  kisin->require_subcommand(1);
  add_common(kisin->add_subcommand("polygon", "single-level Fargues polygon"), "kisin polygon")
      ->add_option("--n", level, "tower level");
  add_common(kisin->add_subcommand("limit", "stabilized limit polygon"), "kisin limit");
  add_common(kisin->add_subcommand("theta", "one refinement step"), "kisin theta");
  add_common(kisin->add_subcommand("decompose", "full refinement to an HN-type module"),
             "kisin decompose");

  CLI11_PARSE(app, argc, argv);

  if (nmax > 0) opts.nmax = nmax;
  if (search_degree > 0) opts.search_degree = search_degree;
  if (bound > 0) opts.bound = bound;
  if (level > 0) opts.n = level;

  try {
    slopeforge::json doc = slopeforge::parse_document(read_input(input));
    if (batch && !doc.is_array())
      slopeforge::fail(slopeforge::errc::schema_error, "$: expected an array in batch mode");
    slopeforge::Report report = slopeforge::run_document(command, doc, opts);
    std::cout << slopeforge::emit(report, format);
    return 0;
  } catch (const slopeforge::kernel_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return (e.code() == slopeforge::errc::schema_error ||
            e.code() == slopeforge::errc::parse_error)
               ? 1
               : 2;
  }
}
