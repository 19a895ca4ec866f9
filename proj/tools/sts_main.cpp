#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sts/amalgam.hpp"
#include "sts/canonical.hpp"
#include "sts/closure.hpp"
#include "sts/completion.hpp"
#include "sts/generic.hpp"
#include "sts/json_io.hpp"
#include "sts/witnesses.hpp"

using nlohmann::json;

namespace {

int exit_code(const sts::Error& e) {
  switch (e.kind()) {
    case sts::ErrorKind::kBudget:
      return 1;
    case sts::ErrorKind::kInvalidInput:
      return 2;
    case sts::ErrorKind::kInternal:
      return 3;
  }
  return 3;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// point-set entries may be compound terms like (a.b)
sts::PointSet parse_terms(const sts::FreeUniverse& u,
                          const std::vector<std::string>& texts) {
  sts::PointSet out;
  for (const auto& t : texts)
    out.push_back(u.normalize(sts::parse_term(t, u.base())));
  return out;
}

sts::PartialSts system_from_json(const json& j) {
  std::vector<std::string> points = j.at("points").get<std::vector<std::string>>();
  std::vector<std::array<std::string, 3>> blocks;
  for (const auto& b : j.at("blocks"))
    blocks.push_back({b.at(0).get<std::string>(), b.at(1).get<std::string>(),
                      b.at(2).get<std::string>()});
  return sts::PartialSts::validate(std::move(points), std::move(blocks));
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sts::invalid_input("FileError", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw sts::invalid_input("ParseError", path + ": " + e.what());
  }
  return j;
}

double env_budget_seconds(double fallback) {
  if (const char* ms = std::getenv("STS_BUDGET_MS"))
    return std::atof(ms) / 1000.0;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Steiner triple system toolkit: validation, completion, free-closure "
      "term algebra, extension-axiom checks, merges, independence and "
      "witness constructions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = 1;
  std::string report_path;
  app.add_option("--seed", seed, "global random seed");
  app.add_option("--threads", threads, "worker threads (1 = deterministic)")
      ->check(CLI::Range(1, 256));
  app.add_option("--report", report_path, "write a JSON result report");

  json report;
  int code = 0;
  std::function<void()> action;

  // validate
  {
    auto* sub = app.add_subcommand("validate", "check a system file");
    auto file = std::make_shared<std::string>();
    sub->add_option("file", *file)->required();
    sub->callback([&, file] {
      action = [&, file] {
        auto s = sts::read_system_file(*file);
        std::cout << "order " << s.size() << ", " << s.num_blocks()
                  << " blocks, " << (s.is_total() ? "total" : "partial")
                  << "\n";
        report["order"] = s.size();
        report["blocks"] = s.num_blocks();
        report["total"] = s.is_total();
      };
    });
  }

  // complete
  {
    auto* sub = app.add_subcommand("complete", "embed into a finite total STS");
    auto file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto max_order = std::make_shared<int>(27);
    sub->add_option("file", *file)->required();
    sub->add_option("--max-order", *max_order);
    sub->add_option("--out", *out);
    sub->callback([&, file, out, max_order] {
      action = [&, file, out, max_order] {
        sts::CompleteOptions opt;
        opt.max_order = *max_order;
        opt.seed = seed;
        auto t = sts::complete_finite(sts::read_system_file(*file), opt);
        std::cout << "completed to order " << t.size() << "\n";
        report["order"] = t.size();
        if (!out->empty()) sts::write_system_file(t, *out);
      };
    });
  }

  // free-step
  {
    auto* sub = app.add_subcommand("free-step",
                                   "adjoin fresh products for undefined pairs");
    auto file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto label = std::make_shared<int>(1);
    sub->add_option("file", *file)->required();
    sub->add_option("--label", *label, "depth label for fresh names");
    sub->add_option("--out", *out);
    sub->callback([&, file, out, label] {
      action = [&, file, out, label] {
        auto t = sts::free_step(sts::read_system_file(*file), *label);
        std::cout << "order " << t.size() << ", " << t.num_blocks()
                  << " blocks\n";
        report["order"] = t.size();
        if (!out->empty()) sts::write_system_file(t, *out);
      };
    });
  }

  // closure
  {
    auto* sub = app.add_subcommand("closure", "generated subquasigroup");
    auto file = std::make_shared<std::string>();
    auto gens = std::make_shared<std::string>();
    auto rank = std::make_shared<int>(4);
    sub->add_option("file", *file)->required();
    sub->add_option("--gens", *gens, "comma-separated terms")->required();
    sub->add_option("--rank", *rank, "term rank budget");
    sub->callback([&, file, gens, rank] {
      action = [&, file, gens, rank] {
        sts::FreeUniverse u(sts::read_system_file(*file));
        sts::TermSet g;
        for (const auto& t : parse_terms(u, split_list(*gens))) g.insert(t);
        auto [set, complete] = u.generated(g, *rank);
        for (const auto& t : set) std::cout << t->text() << "\n";
        std::cout << (complete ? "complete" : "truncated") << ", "
                  << set.size() << " elements\n";
        report["size"] = set.size();
        report["complete"] = complete;
        if (!complete) code = 1;
      };
    });
  }

  // normalize
  {
    auto* sub = app.add_subcommand("normalize", "normal form of a term");
    auto file = std::make_shared<std::string>();
    auto term = std::make_shared<std::string>();
    sub->add_option("file", *file)->required();
    sub->add_option("--term", *term)->required();
    sub->callback([&, file, term] {
      action = [&, file, term] {
        sts::FreeUniverse u(sts::read_system_file(*file));
        auto t = u.normalize(sts::parse_term(*term, u.base()));
        std::cout << t->text() << "\n";
        report["normal_form"] = t->text();
      };
    });
  }

  // einf
  {
    auto* sub = app.add_subcommand(
        "einf", "does a variable have infinitely many solutions");
    auto file = std::make_shared<std::string>();
    auto var = std::make_shared<std::string>();
    auto formula = std::make_shared<std::string>();
    sub->add_option("file", *file)->required();
    sub->add_option("--var", *var)->required();
    sub->add_option("--formula", *formula)->required();
    sub->callback([&, file, var, formula] {
      action = [&, file, var, formula] {
        sts::FreeUniverse u(sts::read_system_file(*file));
        auto phi = sts::parse_formula(*formula, u.base());
        auto res = sts::has_infinite_orbit(phi, *var, u);
        const char* verdict = res.verdict == sts::Orbit::kInfinite ? "infinite"
                              : res.verdict == sts::Orbit::kFinite ? "finite"
                                                                   : "unknown";
        std::cout << verdict;
        if (res.k) std::cout << " (rank bound " << *res.k << ")";
        std::cout << "\n";
        report["verdict"] = verdict;
        if (res.verdict != sts::Orbit::kInfinite) code = 1;
      };
    });
  }

  // delta-check
  {
    auto* sub = app.add_subcommand(
        "delta-check", "does a model satisfy an extension-axiom instance");
    auto model = std::make_shared<std::string>();
    auto inst = std::make_shared<std::string>();
    sub->add_option("model", *model)->required();
    sub->add_option("instance", *inst)->required();
    sub->callback([&, model, inst] {
      action = [&, model, inst] {
        auto m = sts::read_system_file(*model);
        auto j = load_json(*inst);
        auto outer = system_from_json(j);
        std::vector<int> inner;
        for (const auto& nm : j.at("inner"))
          inner.push_back(outer.point(nm.get<std::string>()));
        auto di = sts::DeltaInstance::make(std::move(outer), std::move(inner));
        auto v = sts::check_delta(m, di);
        if (v.holds) {
          std::cout << "holds\n";
        } else {
          std::cout << "fails; inner assignment:";
          for (int p : v.counterexample) std::cout << " " << m.name(p);
          std::cout << "\n";
          code = 1;
        }
        report["holds"] = v.holds;
      };
    });
  }

  // generic
  {
    auto* sub = app.add_subcommand(
        "generic", "staged generic-model chain from a seed system");
    auto seed_file = std::make_shared<std::string>();
    auto out_prefix = std::make_shared<std::string>();
    auto stages = std::make_shared<int>(1);
    auto bound = std::make_shared<int>(3);
    auto rng = std::make_shared<std::uint64_t>(0);
    sub->add_option("--seed-file", *seed_file)->required();
    sub->add_option("--stages", *stages);
    sub->add_option("--bound", *bound, "instance size bound");
    sub->add_option("--rng", *rng);
    sub->add_option("--out-prefix", *out_prefix);
    sub->callback([&, seed_file, out_prefix, stages, bound, rng] {
      action = [&, seed_file, out_prefix, stages, bound, rng] {
        auto chain = sts::generic_build(sts::read_system_file(*seed_file),
                                        *stages, *bound, *rng);
        for (std::size_t i = 0; i < chain.size(); ++i) {
          std::cout << "stage " << i << ": order " << chain[i].size() << "\n";
          if (!out_prefix->empty())
            sts::write_system_file(chain[i],
                                   *out_prefix + std::to_string(i) + ".json");
        }
        report["stages"] = chain.size();
        report["final_order"] = chain.back().size();
      };
    });
  }

  // merge
  {
    auto* sub = app.add_subcommand("merge",
                                   "merge configurations over shared parts");
    auto kind = std::make_shared<std::string>();
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("kind", *kind)->check(CLI::IsMember({"al1", "al25", "family"}));
    sub->add_option("config", *config)->required();
    sub->add_option("--out", *out);
    sub->callback([&, kind, config, out] {
      action = [&, kind, config, out] {
        auto j = load_json(*config);
        sts::FreeUniverse u(system_from_json(j.at("base")));
        const int depth = j.value("depth", 3);
        auto get = [&](const char* key) {
          return parse_terms(u, j.at(key).get<std::vector<std::string>>());
        };
        sts::MergeResult r;
        if (*kind == "al1")
          r = sts::merge_al1(u, get("a0"), get("b0"), get("a1"), get("b1"),
                             depth);
        else if (*kind == "al25")
          r = sts::merge_al25(u, get("a0"), get("a1"), get("b0"), get("b1"),
                              depth);
        else {
          std::vector<std::pair<sts::PointSet, sts::PointSet>> sides;
          for (const auto& sj : j.at("sides"))
            sides.emplace_back(
                parse_terms(u, sj.at("a").get<std::vector<std::string>>()),
                parse_terms(u, sj.at("b").get<std::vector<std::string>>()));
          r = sts::merge_family(u, sides, depth);
        }
        std::cout << "merged A:";
        for (const auto& nm : r.a) std::cout << " " << nm;
        std::cout << "\nextension order " << r.extension.size() << ", depth "
                  << r.depth << "\n";
        report["a"] = r.a;
        report["order"] = r.extension.size();
        if (!out->empty()) sts::write_system_file(r.extension, *out);
      };
    });
  }

  // indep
  {
    auto* sub = app.add_subcommand("indep", "free independence check");
    auto file = std::make_shared<std::string>();
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto c = std::make_shared<std::string>();
    auto depth = std::make_shared<int>(3);
    sub->add_option("file", *file)->required();
    sub->add_option("--a", *a)->required();
    sub->add_option("--b", *b)->required();
    sub->add_option("--c", *c, "may be empty");
    sub->add_option("--depth", *depth);
    sub->callback([&, file, a, b, c, depth] {
      action = [&, file, a, b, c, depth] {
        sts::FreeUniverse u(sts::read_system_file(*file));
        auto r = sts::indep(u, parse_terms(u, split_list(*a)),
                            parse_terms(u, split_list(*b)),
                            parse_terms(u, split_list(*c)), *depth);
        switch (r.verdict) {
          case sts::IndepResult::Verdict::kIndependent:
            std::cout << "independent (depth " << r.depth << ")\n";
            report["verdict"] = "independent";
            break;
          case sts::IndepResult::Verdict::kDependent:
            std::cout << "dependent, witness " << r.witness->text() << "\n";
            report["verdict"] = "dependent";
            report["witness"] = r.witness->text();
            code = 1;
            break;
          case sts::IndepResult::Verdict::kUnknown:
            std::cout << "unknown at depth " << r.depth << "\n";
            report["verdict"] = "unknown";
            code = 1;
            break;
        }
      };
    });
  }

  // tp2
  {
    auto* sub = app.add_subcommand("tp2", "build the two-parameter witness array");
    auto rows = std::make_shared<int>(2);
    auto cols = std::make_shared<int>(2);
    auto verify_depth = std::make_shared<int>(0);
    auto out = std::make_shared<std::string>();
    sub->add_option("--rows", *rows)->required();
    sub->add_option("--cols", *cols)->required();
    sub->add_option("--verify-depth", *verify_depth);
    sub->add_option("--out", *out);
    sub->callback([&, rows, cols, verify_depth, out] {
      action = [&, rows, cols, verify_depth, out] {
        auto arr = sts::tp2_array(*rows, *cols);
        std::cout << arr.sts.size() << " points, " << arr.sts.num_blocks()
                  << " blocks\n";
        report["points"] = arr.sts.size();
        report["blocks"] = arr.sts.num_blocks();
        if (*verify_depth > 0) {
          auto rep = sts::verify_tp2(arr, *verify_depth);
          std::cout << "verified: " << rep.checked_paths << " paths, "
                    << rep.terms_scanned << " terms scanned\n";
          report["verified"] = rep.ok();
        }
        if (!out->empty()) {
          sts::write_system_file(arr.sts, *out);
          json labels(arr.labels);
          std::ofstream lf(*out + ".labels.json");
          lf << labels.dump(2) << "\n";
        }
      };
    });
  }

  // sma1
  {
    auto* sub = app.add_subcommand(
        "sma1", "smallness chain over a family of total systems");
    auto files = std::make_shared<std::vector<std::string>>();
    auto prefix = std::make_shared<int>(-1);
    auto out_prefix = std::make_shared<std::string>();
    sub->add_option("files", *files, "family member system files")->required();
    sub->add_option("--prefix", *prefix, "attachments (default: family size)");
    sub->add_option("--out-prefix", *out_prefix);
    sub->callback([&, files, prefix, out_prefix] {
      action = [&, files, prefix, out_prefix] {
        std::vector<sts::PartialSts> family;
        for (const auto& f : *files) family.push_back(sts::read_system_file(f));
        int t = *prefix < 0 ? (int)family.size() : *prefix;
        auto chain = sts::sma1_build(family, t);
        for (std::size_t i = 0; i < chain.logs.size(); ++i) {
          const auto& log = chain.logs[i];
          std::cout << "stage " << i + 1 << ": member " << log.member
                    << ", k=" << log.k << ", " << log.iterations
                    << " saturation steps, order "
                    << chain.stages[i + 1].size() << "\n";
        }
        auto rep = sts::sma1_audit(chain, family);
        for (const auto& why : rep.failures) std::cerr << "audit: " << why << "\n";
        if (!rep.ok)
          throw sts::internal_error("AuditFailed",
                                    "smallness chain audit failed");
        std::cout << "audit passed\n";
        report["stages"] = chain.stages.size();
        report["final_order"] = chain.stages.back().size();
        if (!out_prefix->empty())
          for (std::size_t i = 0; i < chain.stages.size(); ++i)
            sts::write_system_file(chain.stages[i],
                                   *out_prefix + std::to_string(i) + ".json");
      };
    });
  }

  // doyen
  {
    auto* sub = app.add_subcommand(
        "doyen", "search for a subsystem-free STS of a given order");
    auto order = std::make_shared<int>(0);
    auto budget = std::make_shared<double>(env_budget_seconds(60.0));
    auto out = std::make_shared<std::string>();
    sub->add_option("--order", *order)->required();
    sub->add_option("--budget", *budget, "seconds");
    sub->add_option("--out", *out);
    sub->callback([&, order, budget, out] {
      action = [&, order, budget, out] {
        auto found = sts::doyen_search(*order, *budget, seed);
        if (!found) {
          std::cout << "no subsystem-free system found within budget\n";
          report["found"] = false;
          code = 1;
          return;
        }
        std::cout << "found subsystem-free STS(" << found->size() << ")\n";
        report["found"] = true;
        if (!out->empty()) sts::write_system_file(*found, *out);
      };
    });
  }

  // isolate
  {
    auto* sub = app.add_subcommand("isolate",
                                   "isolating formula of a point tuple");
    auto file = std::make_shared<std::string>();
    auto tuple = std::make_shared<std::string>();
    sub->add_option("file", *file)->required();
    sub->add_option("--tuple", *tuple)->required();
    sub->callback([&, file, tuple] {
      action = [&, file, tuple] {
        auto m = sts::read_system_file(*file);
        std::vector<int> pts;
        for (const auto& nm : split_list(*tuple)) pts.push_back(m.point(nm));
        auto iso = sts::isolating_formula(pts, m);
        if (iso.num_existential > 0) {
          std::cout << "exists";
          for (std::size_t i = iso.formula.vars.size() - iso.num_existential;
               i < iso.formula.vars.size(); ++i)
            std::cout << " " << iso.formula.vars[i];
          std::cout << ": ";
        }
        for (std::size_t i = 0; i < iso.formula.lits.size(); ++i) {
          const auto& lit = iso.formula.lits[i];
          if (i) std::cout << " & ";
          std::cout << sts::term_to_text(lit.lhs)
                    << (lit.rel == sts::Rel::kEq ? " = " : " != ")
                    << sts::term_to_text(lit.rhs);
        }
        std::cout << "\n";
        report["literals"] = iso.formula.lits.size();
        report["existential"] = iso.num_existential;
      };
    });
  }

  // equiv
  {
    auto* sub = app.add_subcommand(
        "equiv", "bounded-rank type equivalence of two point tuples");
    auto file1 = std::make_shared<std::string>();
    auto file2 = std::make_shared<std::string>();
    auto t1 = std::make_shared<std::string>();
    auto t2 = std::make_shared<std::string>();
    auto m = std::make_shared<int>(2);
    sub->add_option("file1", *file1)->required();
    sub->add_option("file2", *file2)->required();
    sub->add_option("--t1", *t1)->required();
    sub->add_option("--t2", *t2)->required();
    sub->add_option("--m", *m, "closure rank");
    sub->callback([&, file1, file2, t1, t2, m] {
      action = [&, file1, file2, t1, t2, m] {
        auto s1 = sts::read_system_file(*file1);
        auto s2 = sts::read_system_file(*file2);
        std::vector<int> i1, i2;
        for (const auto& nm : split_list(*t1)) i1.push_back(s1.point(nm));
        for (const auto& nm : split_list(*t2)) i2.push_back(s2.point(nm));
        bool eq = sts::qf_equiv_m(s1, i1, s2, i2, *m);
        std::cout << (eq ? "equivalent" : "inequivalent") << " at rank " << *m
                  << "\n";
        report["equivalent"] = eq;
        if (!eq) code = 1;
      };
    });
  }

  try {
    app.parse(argc, argv);
    action();
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const sts::Error& e) {
    std::cerr << e.what() << "\n";
    code = exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    code = 3;
  }

  if (!report_path.empty()) {
    report["exit"] = code;
    std::ofstream out(report_path);
    out << report.dump(2) << "\n";
  }
  return code;
}
