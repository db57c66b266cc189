#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "squashkit/error.hpp"
#include "squashkit/finder.hpp"
#include "squashkit/fock.hpp"
#include "squashkit/json_io.hpp"
#include "squashkit/nogo.hpp"
#include "squashkit/squash.hpp"

using namespace squashkit;
using io::Json;

namespace {

enum Exit : int { kOk = 0, kNegative = 1, kInputError = 2, kUndecided = 3 };

constexpr int kMaxSweep = 8;

struct Options {
  std::vector<std::string> sectors;
  int sweep_max = 0;
  int sweep_modes = 1;
  std::string povm;
  std::string builtin;
  std::string unitary;
  int k = 1;
  std::optional<double> tol;
  int max_iter = kDefaultMaxIter;
  std::string group = "c4";
  std::string action;
  std::string squash;
  int trials = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

// Unmet hypotheses of a construction are negative results; everything else is bad input.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SymmetryViolated:
    case ErrorCode::RankNotTwo:
    case ErrorCode::SpectrumAsymmetric:
    case ErrorCode::DeficiencyNotPsd:
    case ErrorCode::VerificationFailed:
    case ErrorCode::KNotOne:
    case ErrorCode::TildeNotVerified:
    case ErrorCode::NoConvergence:
      return kNegative;
    default:
      return kInputError;
  }
}

double default_tol(const Options& o, double fallback) {
  if (o.tol) return *o.tol;
  if (const char* env = std::getenv("SQUASHKIT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw Error(ErrorCode::ParseError, "SQUASHKIT_TOL must be a positive number");
    return v;
  }
  return fallback;
}

std::vector<int> parse_sector(const std::string& text) {
  std::vector<int> photons;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      photons.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "sector entries must be integers: '" + text + "'");
    }
  }
  return photons;
}

std::string sector_tag(const FockSector& s) {
  std::string tag = "N_";
  for (int i = 0; i < s.modes(); ++i) tag += (i ? "-" : "") + std::to_string(s.photons()[i]);
  return tag;
}

void emit(const Options& o, const Json& j) {
  if (o.out.empty()) {
    std::cout << io::dump(j);
  } else {
    io::write_json_file(o.out, j);
  }
}

Bb84Povm load_povm(const Options& o) {
  if (!o.builtin.empty()) {
    if (o.builtin == "m0") return counterexample_m0();
    if (o.builtin == "ideal") return Bb84Povm::ideal_qubit();
    throw Error(ErrorCode::ParseError, "unknown builtin POVM '" + o.builtin + "' (use m0 or ideal)");
  }
  if (!o.povm.empty()) return io::povm_from_json(io::read_json_file(o.povm));
  if (o.sectors.size() == 1) return build_detector(FockSector(parse_sector(o.sectors.front()))).povm;
  throw Error(ErrorCode::ParseError, "give --povm, --builtin or a single --N");
}

FiniteGroup load_group(const std::string& name) {
  if (name == "trivial") return FiniteGroup::trivial();
  if (name == "s3") return FiniteGroup::s3();
  if (name.size() > 1 && (name[0] == 'c' || name[0] == 'C') && name.find_first_not_of("0123456789", 1) == std::string::npos) {
    return FiniteGroup::cyclic(std::stoi(name.substr(1)));
  }
  return io::group_from_json(io::read_json_file(name));
}

LabelAction load_action(const Options& o, const FiniteGroup& g) {
  if (!o.action.empty()) {
    if (o.action == "identity") return LabelAction::identity(g);
    if (o.action == "rotate") return LabelAction::canonical_c4(g);
    if (o.action == "swap") return LabelAction::basis_swap(g);
    return io::action_from_json(g, io::read_json_file(o.action));
  }
  // Defaults for built-in groups.
  if (o.group == "c2") return LabelAction::basis_swap(g);
  if (g.order() % 4 == 0 && (o.group[0] == 'c' || o.group[0] == 'C')) return LabelAction::canonical_c4(g);
  return LabelAction::identity(g);
}

int cmd_detector(const Options& o) {
  std::vector<FockSector> sectors;
  for (const auto& text : o.sectors) sectors.emplace_back(parse_sector(text));
  if (o.sweep_max > 0) {
    if (o.sweep_max > kMaxSweep) throw Error(ErrorCode::InvalidSector, "--sweep-max is limited to 8");
    for (auto& s : enumerate_sectors(1, o.sweep_modes, o.sweep_max)) sectors.push_back(std::move(s));
  }
  if (sectors.empty()) throw Error(ErrorCode::InvalidSector, "give --N or --sweep-max");

  if (sectors.size() == 1) {
    emit(o, io::to_json(build_detector(sectors.front())));
    return kOk;
  }
  if (o.out.empty()) {
    Json all = Json::array();
    for (const auto& s : sectors) all.push_back(io::to_json(build_detector(s)));
    std::cout << io::dump(all);
    return kOk;
  }
  std::filesystem::create_directories(o.out);
  for (const auto& s : sectors) {
    const auto path = std::filesystem::path(o.out) / (sector_tag(s) + ".json");
    io::write_json_file(path.string(), io::to_json(build_detector(s)));
  }
  return kOk;
}

int cmd_povm(const Options& o) {
  emit(o, io::to_json(load_povm(o)));
  return kOk;
}

int cmd_construct(const Options& o) {
  const double tol = default_tol(o, 1e-9);
  Bb84Povm p = Bb84Povm::ideal_qubit();
  C4Symmetry sym;
  if (o.povm.empty() && o.builtin.empty()) {
    if (o.sectors.size() != 1) throw Error(ErrorCode::ParseError, "construct needs one --N/--sector or --povm with --unitary");
    const auto model = build_detector(FockSector(parse_sector(o.sectors.front())));
    p = model.povm;
    sym = sector_symmetry(model);
  } else {
    p = load_povm(o);
    if (o.unitary.empty()) throw Error(ErrorCode::ParseError, "--povm requires --unitary");
    sym = C4Symmetry{io::matrix_from_json(io::read_json_file(o.unitary)), o.k};
  }
  const auto f = construct_theorem1(p, sym, tol);
  Json j = io::to_json(f);
  j["verification"] = io::to_json(verify_squash(f, p, tol));
  emit(o, j);
  return kOk;
}

int cmd_find(const Options& o) {
  const auto p = load_povm(o);
  const auto report = find_squash(p, o.max_iter, default_tol(o, kDefaultGapTol));
  emit(o, io::to_json(report));
  switch (report.verdict) {
    case Verdict::Feasible: return kOk;
    case Verdict::Infeasible: return kNegative;
    case Verdict::Undecided: return kUndecided;
  }
  return kUndecided;
}

int cmd_symmetrize(const Options& o) {
  const auto g = load_group(o.group);
  const auto s = symmetrize(load_povm(o), g, load_action(o, g));
  Json j = io::to_json(s.tilde);
  j["group"] = io::to_json(s.group);
  j["action"] = io::to_json(s.action);
  j["definition2"] = io::to_json(check_definition2(s.rep, s.action, s.tilde));
  emit(o, j);
  return kOk;
}

int cmd_pullback(const Options& o) {
  const auto g = load_group(o.group);
  const auto s = symmetrize(load_povm(o), g, load_action(o, g));
  std::optional<SquashMap> tilde;
  double tilde_tol = default_tol(o, kPullbackTildeTol);
  if (!o.squash.empty()) {
    tilde = io::squash_from_json(io::read_json_file(o.squash));
  } else {
    const auto report = find_squash(s.tilde, o.max_iter);
    if (report.verdict == Verdict::Infeasible) {
      std::cerr << "no squash exists for the symmetrized POVM\n";
      emit(o, io::to_json(report));
      return kNegative;
    }
    if (report.verdict == Verdict::Undecided) {
      emit(o, io::to_json(report));
      return kUndecided;
    }
    tilde = report.squash;
    // Finder output is only certified at its own verification tolerance.
    tilde_tol = std::max(tilde_tol, kFeasibleVerifyTol);
  }
  const auto f = pullback_squash(s, *tilde, tilde_tol);
  Json j = io::to_json(f);
  const auto v = verify_squash(f, s.base, tilde_tol);
  j["verification"] = io::to_json(v);
  emit(o, j);
  return v.passed ? kOk : kNegative;
}

int cmd_attack(const Options& o) {
  if (o.trials < 0) throw Error(ErrorCode::ParseError, "--trials must be non-negative");
  emit(o, io::to_json(bbm92_attack(load_povm(o), o.trials, o.seed)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"squashkit: squash operators for BB84-type detector models"};
  app.require_subcommand(1);
  Options o;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output file (stdout when omitted)"); };
  auto add_povm = [&](CLI::App* c) {
    c->add_option("--povm", o.povm, "POVM JSON file");
    c->add_option("--builtin", o.builtin, "Built-in POVM: m0 or ideal");
    c->add_option("--N,--sector", o.sectors, "Photon numbers per mode, e.g. 2 or 1,1");
  };

  auto* detector = app.add_subcommand("detector", "Write threshold-detector models for Fock sectors");
  detector->add_option("--N,--sector", o.sectors, "Photon numbers per mode, e.g. 2 or 1,1 (repeatable)");
  detector->add_option("--sweep-max", o.sweep_max, "Add every sector with 1 <= sum n_i <= value (at most 8)");
  detector->add_option("--sweep-modes", o.sweep_modes, "Largest mode count in the sweep")->check(CLI::Range(1, 3));
  detector->add_option("--out", o.out, "Output file, or directory when several sectors are written");

  auto* povm = app.add_subcommand("povm", "Write a POVM JSON file");
  add_povm(povm);
  add_out(povm);

  auto* squash = app.add_subcommand("squash", "Construct or search for a squash operator");
  squash->require_subcommand(1);
  auto* construct = squash->add_subcommand("construct", "Analytic construction for C4-symmetric POVMs");
  add_povm(construct);
  construct->add_option("--unitary", o.unitary, "Matrix JSON for U (with --povm)");
  construct->add_option("--k", o.k, "U^{4k} = I")->check(CLI::PositiveNumber);
  construct->add_option("--tol", o.tol, "Tolerance (default 1e-9 or SQUASHKIT_TOL)");
  add_out(construct);
  auto* find = squash->add_subcommand("find", "Numerical feasibility search");
  add_povm(find);
  find->add_option("--tol", o.tol, "Projection gap tolerance (default 1e-8 or SQUASHKIT_TOL)");
  find->add_option("--max-iter", o.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  add_out(find);

  auto* nogo = app.add_subcommand("nogo", "Symmetrization, pullback and attack tools");
  nogo->require_subcommand(1);
  auto add_group = [&](CLI::App* c) {
    c->add_option("--group", o.group, "trivial, c<n>, s3 or a group JSON file");
    c->add_option("--action", o.action, "identity, rotate, swap or an action JSON file");
  };
  auto* symmetrize_cmd = nogo->add_subcommand("symmetrize", "Attach a group register to make the POVM symmetric");
  add_povm(symmetrize_cmd);
  add_group(symmetrize_cmd);
  add_out(symmetrize_cmd);
  auto* pullback = nogo->add_subcommand("pullback", "Restrict a squash of the symmetrized POVM");
  add_povm(pullback);
  add_group(pullback);
  pullback->add_option("--squash", o.squash, "Squash JSON for the symmetrized POVM (searched for when omitted)");
  pullback->add_option("--tol", o.tol, "Verification tolerance for the symmetrized squash");
  pullback->add_option("--max-iter", o.max_iter, "Iteration cap for the search")->check(CLI::NonNegativeNumber);
  add_out(pullback);
  auto* attack = nogo->add_subcommand("attack", "Simulate the entanglement-based attack");
  add_povm(attack);
  attack->add_option("--trials", o.trials, "Number of rounds");
  attack->add_option("--seed", o.seed, "Generator seed");
  add_out(attack);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*detector) return cmd_detector(o);
    if (*povm) return cmd_povm(o);
    if (*construct) return cmd_construct(o);
    if (*find) return cmd_find(o);
    if (*symmetrize_cmd) return cmd_symmetrize(o);
    if (*pullback) return cmd_pullback(o);
    if (*attack) return cmd_attack(o);
  } catch (const PipelineError& e) {
    std::cerr << "error at stage " << e.stage() << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
