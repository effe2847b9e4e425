#include <CLI11.hpp>

#include <Eigen/Core>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wba/serialize.hpp"
#include "wba/suites.hpp"

namespace {

using namespace wba;

Partition parse_partition(const std::string& text) {
  std::vector<int> parts;
  std::string token;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!token.empty()) parts.push_back(std::stoi(token));
      token.clear();
    } else if (c >= '0' && c <= '9') {
      token += c;
    } else {
      throw std::invalid_argument("cannot read shape: " + text);
    }
  }
  if (parts.empty()) throw std::invalid_argument("empty shape");
  return Partition(parts);
}

Letter parse_letter(char c) {
  if (c == 'S' || c == 's') return Letter::S;
  if (c == 'A' || c == 'a') return Letter::A;
  throw std::invalid_argument(std::string("letter must be S or A, got ") + c);
}

std::pair<Letter, Letter> parse_letter_pair(const std::string& text) {
  if (text.size() != 2) throw std::invalid_argument("letter pair must be two of S, A: " + text);
  return {parse_letter(text[0]), parse_letter(text[1])};
}

Sector parse_sector(const std::string& text) {
  auto [a, b] = parse_letter_pair(text);
  return make_sector(a, b);
}

int cmd_dims(int p, int d) {
  std::printf("p=%d d=%d\n", p, d);
  if (p == 1) {
    std::printf("  basis {1 - P+, P+}: two scalar lines\n");
    std::printf("  total dim 2\n");
    return 0;
  }
  if (p == 2) {
    Decomposition22 dec = decompose_22(d);
    int scalars = 0;
    for (const Block22& b : dec.blocks) {
      if (b.matrix)
        std::printf("  %s: M(%d), dim %d\n", b.ideal.c_str(), b.size, b.dimension);
      else
        ++scalars;
    }
    if (scalars > 0) std::printf("  layer-0: %d scalar line%s\n", scalars, scalars > 1 ? "s" : "");
    std::printf("  total dim %d, dense span rank %d\n", dec.total_dimension,
                dec.dense_span_rank);
    return 0;
  }
  // Flipping the right-side letters is a linear bijection onto the plain
  // permutation span, so the dimension counts squared tableau numbers over
  // shapes with at most d rows.
  int total = 0;
  for (const Partition& lambda : enumerate_partitions(2 * p)) {
    if (static_cast<int>(lambda.parts().size()) > d) continue;
    int f = young_yamanouchi(lambda, Orientation::LeftToRight)->dimension();
    std::printf("  shape %s: tableaux %d, contributes %d\n", lambda.to_string().c_str(), f,
                f * f);
    total += f * f;
  }
  std::printf("  total dim %d\n", total);
  return 0;
}

int cmd_verify(const std::string& suite, int p, int d, double tol, bool tol_given) {
  std::vector<VerificationReport> reports = run_suite(suite, p, d);
  if (tol_given)
    for (VerificationReport& r : reports) {
      r.tolerance = tol;
      r.pass = r.max_abs_deviation <= tol;
    }
  const VerificationReport* worst = nullptr;
  for (const VerificationReport& r : reports) {
    std::cout << to_json(r).dump() << "\n";
    if (!r.pass && (!worst || r.max_abs_deviation > worst->max_abs_deviation)) worst = &r;
  }
  if (worst) {
    std::fprintf(stderr, "FAIL %s p=%d d=%d deviation=%.3e tolerance=%.3e %s\n",
                 worst->claim_id.c_str(), worst->p, worst->d, worst->max_abs_deviation,
                 worst->tolerance, worst->detail.c_str());
    return 1;
  }
  return 0;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_export(const std::string& object, const std::string& format, const std::string& out,
               int p, int d, int k, const std::string& mu, int i, int j, const std::string& ij,
               const std::string& kl) {
  if (object == "gram") {
    GramMatrix g = gram_matrix(p, d);
    if (format == "json")
      write_text_file(out, to_json(g).dump() + "\n");
    else if (format == "csv")
      write_text_file(out, csv_of(g));
    else
      throw std::invalid_argument("gram exports as json or csv");
    return 0;
  }

  DenseOperator x = DenseOperator::zero(d, 1);
  if (object == "unit") {
    Partition shape = parse_partition(mu.empty() ? std::to_string(p) : mu);
    x = matrix_unit(shape, i, j, d);
  } else if (object == "arc") {
    x = arc_operator(p, d, k < 0 ? 1 : k);
  } else if (object == "q") {
    x = q_projector(p, d, k < 0 ? 1 : k);
  } else if (object == "g2") {
    auto [a, b] = parse_letter_pair(ij);
    x = g2_unit(a, b, d);
  } else if (object == "g1") {
    x = g1_unit(parse_sector(ij), parse_sector(kl), d);
  } else if (object == "g0") {
    auto [a, b] = parse_letter_pair(ij);
    x = g0_unit(a, b, d);
  } else {
    throw std::invalid_argument("unknown object: " + object);
  }

  if (format == "binary")
    write_operator_file(out, x);
  else if (format == "json")
    write_text_file(out, to_json(x).dump() + "\n");
  else if (format == "csv")
    write_text_file(out, csv_of(x));
  else
    throw std::invalid_argument("unknown format: " + format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("WBA_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"partially transposed permutation algebra toolkit"};
  app.require_subcommand(1);

  int p = 2, d = 3, k = -1, row = 1, col = 1;
  double tol = 1e-9;
  std::string suite = "all", object, format = "binary", out, mu, ij = "SS", kl = "SS";

  CLI::App* dims = app.add_subcommand("dims", "print block structure and dimensions");
  dims->add_option("--p", p, "letters per side")->check(CLI::Range(1, 3));
  dims->add_option("--d", d, "local dimension")->check(CLI::Range(2, 64));

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite, one JSON line per claim");
  verify->add_option("suite", suite, "units|q|gram|a22|squeeze|appendix|all")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--p", p, "letters per side")->check(CLI::Range(1, 3));
  verify->add_option("--d", d, "local dimension")->check(CLI::Range(2, 64));
  CLI::Option* tol_opt = verify->add_option("--tol", tol, "override pass threshold");

  CLI::App* exp = app.add_subcommand("export", "write an operator or matrix to a file");
  exp->add_option("object", object, "unit|arc|q|g2|g1|g0|gram")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>{"unit", "arc", "q", "g2", "g1", "g0", "gram"}));
  exp->add_option("--p", p, "letters per side")->check(CLI::Range(1, 3));
  exp->add_option("--d", d, "local dimension")->check(CLI::Range(2, 64));
  exp->add_option("--k", k, "arc count for arc, projector depth for q");
  exp->add_option("--mu", mu, "unit shape, comma-separated parts, e.g. 2,1");
  exp->add_option("--i", row, "unit row path index");
  exp->add_option("--j", col, "unit column path index");
  exp->add_option("--ij", ij, "letter pair for g2/g0, row sector for g1");
  exp->add_option("--kl", kl, "column sector for g1");
  exp->add_option("--format", format, "binary|json|csv")
      ->check(CLI::IsMember(std::vector<std::string>{"binary", "json", "csv"}));
  exp->add_option("--out", out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dims->parsed()) return cmd_dims(p, d);
    if (verify->parsed()) return cmd_verify(suite, p, d, tol, tol_opt->count() > 0);
    if (exp->parsed()) return cmd_export(object, format, out, p, d, k, mu, row, col, ij, kl);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
