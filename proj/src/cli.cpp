#include "cmr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cmr/extractor.hpp"
#include "cmr/kernel.hpp"
#include "cmr/ordinals.hpp"
#include "cmr/realcheck.hpp"

#ifndef CMR_CORPUS_DIR
#define CMR_CORPUS_DIR "corpus"
#endif

namespace cmr::cli {

namespace fs = std::filesystem;

std::string corpus_dir() {
  if (const char* e = std::getenv("CMR_CORPUS"); e && *e) return e;
  return CMR_CORPUS_DIR;
}

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string theory;  // empty: from the proof, else cm
  std::uint64_t fuel = 1000000;
  std::uint64_t bound = 50;
  std::string format = "text";
  bool compiled = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

kernel::Proof load_proof(const std::string& path) {
  auto text = slurp(path);
  try {
    return kernel::parse_proof(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const syntax::SortError& e) {
    throw InputError(path + ": " + e.what());
  }
}

kernel::Theory pick_theory(const Config& c, const kernel::Proof& p) {
  if (!c.theory.empty()) {
    auto t = kernel::theory_from_name(c.theory);
    if (!t) throw InputError("unknown theory " + c.theory);
    return *t;
  }
  return p.theory.value_or(kernel::Theory::CM);
}

realcheck::Bounds bounds_of(const Config& c) {
  realcheck::Bounds b;
  b.N = c.bound;
  b.fuel = c.fuel;
  return b;
}

void print_verdict(const kernel::Verdict& v, const Config& c, std::ostream& out) {
  if (c.format == "json") {
    out << v.to_json() << "\n";
  } else if (v.accepted) {
    out << "accept\n";
  } else {
    out << "reject: line " << v.bad_line << ": " << v.reason << " [" << v.reason_code << "]\n";
  }
}

int cmd_check(const std::string& file, const Config& c, std::ostream& out) {
  auto p = load_proof(file);
  auto v = kernel::check_proof(p, pick_theory(c, p));
  print_verdict(v, c, out);
  return v.accepted ? kOk : kReject;
}

int cmd_extract(const std::string& file, const Config& c, std::ostream& out) {
  auto p = load_proof(file);
  auto th = pick_theory(c, p);
  auto v = kernel::check_proof(p, th);
  if (!v.accepted) {
    print_verdict(v, c, out);
    return kReject;
  }
  auto ex = extractor::extract(p, th);
  if (c.format == "json")
    out << ex.trace_json(c.compiled) << "\n";
  else
    out << pca::print(c.compiled ? ex.final_line().compiled : ex.final_line().lam_form) << "\n";
  return kOk;
}

int exit_for(const realcheck::Verdict3& v) { return v.yes() ? kOk : v.no() ? kReject : kUnknown; }

realcheck::Report realize_report(const kernel::Proof& p, kernel::Theory th, const Config& c) {
  return realcheck::check_theorem(p, th, realcheck::Env{}, bounds_of(c));
}

void print_report(const realcheck::Report& r, const Config& c, std::ostream& out) {
  if (c.format == "json") {
    out << r.to_json() << "\n";
    return;
  }
  out << "verdict: " << realcheck::verdict_name(r.verdict.kind);
  if (!r.verdict.reason.empty()) out << " (" << r.verdict.reason << ")";
  out << "\n";
  for (const auto& w : r.witnesses) out << "witness " << w.path << " " << w.kind << " " << w.value << "\n";
  out << "fuel used: " << r.fuel_used << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
}

int cmd_realize(const std::string& file, const Config& c, std::ostream& out) {
  auto p = load_proof(file);
  auto th = pick_theory(c, p);
  auto v = kernel::check_proof(p, th);
  if (!v.accepted) {
    print_verdict(v, c, out);
    return kReject;
  }
  auto r = realize_report(p, th, c);
  print_report(r, c, out);
  return exit_for(r.verdict);
}

ordinals::Ord read_ord(const std::string& s) {
  try {
    return ordinals::normalize(ordinals::parse(s));
  } catch (const ParseError& e) {
    throw InputError(std::string("ordinal ") + e.what());
  }
}

int cmd_ord(const std::vector<std::string>& args, std::ostream& out) {
  if (args.empty()) throw InputError("ord: expected cmp or norm");
  const auto& op = args[0];
  if (op == "cmp") {
    if (args.size() != 3) throw InputError("ord cmp takes two notations");
    out << ordinals::cmp_symbol(ordinals::ord_cmp(read_ord(args[1]), read_ord(args[2]))) << "\n";
    return kOk;
  }
  if (op == "norm") {
    if (args.size() != 2) throw InputError("ord norm takes one notation");
    out << ordinals::print(read_ord(args[1])) << "\n";
    return kOk;
  }
  throw InputError("ord: unknown operation " + op);
}

int cmd_kb(const std::string& file, const Config& c, std::ostream& out) {
  ordinals::FinTree t;
  try {
    t = ordinals::parse_tree(slurp(file));
  } catch (const ParseError& e) {
    throw InputError(file + ":" + e.what());
  }
  auto sorted = ordinals::kb_sort(t);
  if (c.format == "json") {
    nlohmann::json j = sorted;
    out << j.dump() << "\n";
  } else {
    for (const auto& s : sorted) out << ordinals::print_seq(s) << "\n";
  }
  return kOk;
}

// check, extract and realize every proof in the corpus; a NAME.report.json
// next to NAME.proof is the expected report.
int cmd_corpus(const Config& c, std::ostream& out) {
  const fs::path dir = corpus_dir();
  if (!fs::is_directory(dir)) throw InputError("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".proof") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int failures = 0;
  for (const auto& f : files) {
    const auto name = f.stem().string();
    auto p = load_proof(f.string());
    auto th = pick_theory(c, p);
    auto v = kernel::check_proof(p, th);
    std::string problem;
    if (!v.accepted) {
      problem = "rejected: " + v.reason;
    } else {
      extractor::extract(p, th);
      auto r = realize_report(p, th, c);
      if (!r.verdict.yes()) problem = std::string("verdict ") + std::string(realcheck::verdict_name(r.verdict.kind));
      auto golden = f;
      golden.replace_extension(".report.json");
      if (problem.empty() && fs::exists(golden)) {
        auto want = nlohmann::json::parse(slurp(golden.string()));
        if (want != nlohmann::json::parse(r.to_json())) problem = "report differs from " + golden.filename().string();
      }
    }
    if (problem.empty()) {
      out << name << ": ok\n";
    } else {
      out << name << ": FAIL " << problem << "\n";
      ++failures;
    }
  }
  out << files.size() - static_cast<size_t>(failures) << "/" << files.size() << " passed\n";
  return failures ? kReject : kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof kernel and realiser extraction for CM", "cmr"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--theory", c.theory, "cm or cm-gwo (default: as declared in the proof, else cm)");
  app.add_option("--fuel", c.fuel, "reduction steps per evaluation")->check(CLI::PositiveNumber);
  app.add_option("--bound", c.bound, "quantifier and search bound N")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--compiled", c.compiled, "print the S/K form");

  std::string file;
  std::vector<std::string> ord_args;
  auto* check = app.add_subcommand("check", "check a proof");
  auto* extract = app.add_subcommand("extract", "print the realiser of a proof");
  auto* realize = app.add_subcommand("realize", "check the realiser against the theorem");
  auto* kb = app.add_subcommand("kb", "Kleene-Brouwer sort of a finite tree");
  for (auto* s : {check, extract, realize, kb}) s->add_option("file", file)->required();
  auto* ord = app.add_subcommand("ord", "ordinal notations: cmp A B | norm A");
  ord->add_option("args", ord_args)->required();
  auto* corpus = app.add_subcommand("corpus", "run the corpus gate");
  for (auto* s : {check, extract, realize, kb, ord, corpus}) s->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "cmr: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*check) return cmd_check(file, c, out);
    if (*extract) return cmd_extract(file, c, out);
    if (*realize) return cmd_realize(file, c, out);
    if (*kb) return cmd_kb(file, c, out);
    if (*ord) return cmd_ord(ord_args, out);
    if (*corpus) return cmd_corpus(c, out);
  } catch (const InputError& e) {
    err << "cmr: " << e.what() << "\n";
    return kInputError;
  } catch (const ordinals::NotNormal& e) {
    err << "cmr: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "cmr: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace cmr::cli
