// sunada-lab: replays the Sunada, orbifold and congruence constructions and
// prints a pass/fail report. Exit codes: 0 pass, 1 fail, 2 bad input.

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "sunada_lab/sunada_lab.hpp"

namespace {

using sunada_lab::Report;

struct Common {
  bool json = false;
  bool timing = false;
  std::size_t max_group_size = 5'000'000;
};

int emit(const Report& r, const Common& c) {
  if (c.json) {
    std::cout << sunada_lab::to_json(r, c.timing).dump(2) << "\n";
  } else {
    std::cout << sunada_lab::to_text(r, c.timing);
  }
  return r.pass() ? 0 : 1;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Emit the report as JSON");
  sub->add_flag("--timing", c.timing, "Include runtime_ms (output is then not reproducible)");
  sub->add_option("--max-group-size", c.max_group_size, "Refuse to enumerate larger groups")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mechanical checks of Sunada triples, transplantations, orbifold covers and congruence triples"};
  app.require_subcommand(1);

  Common common;
  sunada_lab::SunadaVerifyOptions sv;
  auto* sunada = app.add_subcommand("sunada-verify", "Sunada triple PSL(3,Z/2) with its two index-7 subgroups");
  add_common(sunada, common);
  sunada->add_flag("--corrupt", sv.corrupt, "Replace H2 by a Sylow 7-subgroup (negative control)");

  auto* cycles = app.add_subcommand("cycle-table", "Cycle types on G/H1 and G/H2 by element order");
  add_common(cycles, common);

  std::string ends = "paper";
  auto* thm1 = app.add_subcommand("theorem1", "Genus and ends of the covers of orbifold bases");
  add_common(thm1, common);
  thm1->add_option("--ends-convention", ends, "paper or smooth")->check(CLI::IsMember({"paper", "smooth"}));

  sunada_lab::TransplantOptions tp;
  auto* transplant = app.add_subcommand("transplant", "Find and verify a transplantation operator");
  add_common(transplant, common);
  transplant->add_option("--gens", tp.gens, "preset or random")->check(CLI::IsMember({"preset", "random"}));
  transplant->add_option("--seed", tp.seed, "Seed for --gens random");
  transplant->add_option("--coeff-bound", tp.coeff_bound, "Coefficients range over 0..bound");

  sunada_lab::Theorem2Options t2;
  auto* thm2 = app.add_subcommand("theorem2", "Congruence Sunada triple in PSL(2,Z/14p)");
  add_common(thm2, common);
  thm2->add_option("--p", t2.p, "Prime p = 7 (mod 8), p != 7");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    sunada_lab::GroupOptions gopts;
    gopts.max_size = common.max_group_size;
    if (*sunada) return emit(sunada_lab::run_sunada_verify(sv), common);
    if (*cycles) return emit(sunada_lab::run_cycle_table(), common);
    if (*thm1) return emit(sunada_lab::run_theorem1(*sunada_lab::parse_ends_convention(ends)), common);
    if (*transplant) return emit(sunada_lab::run_transplant(tp), common);
    if (*thm2) {
      t2.group = gopts;
      return emit(sunada_lab::run_theorem2(t2), common);
    }
  } catch (const sunada_lab::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sunada_lab::NotFoundError& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return 2;
  } catch (const sunada_lab::SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
