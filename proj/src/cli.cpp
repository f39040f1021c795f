#include "lexaudit/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexaudit/annotate.hpp"
#include "lexaudit/audit.hpp"
#include "lexaudit/config.hpp"
#include "lexaudit/error.hpp"
#include "lexaudit/report.hpp"
#include "lexaudit/service.hpp"
#include "lexaudit/stats.hpp"

namespace lexaudit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CorpusArgs {
  std::vector<std::string> paths;
  std::vector<std::string> formats{"massive"};
  std::vector<std::string> names;
  std::string partition = "train";

  void add(CLI::App* app, bool required = true) {
    auto* c = app->add_option("--corpus", paths, "Corpus file (repeatable)");
    if (required) c->required();
    app->add_option("--format", formats, "massive | redial, one per corpus or one for all");
    app->add_option("--name", names, "Corpus name, one per corpus (default: file stem)");
    app->add_option("--partition", partition, "Partition label for ReDial corpora");
  }

  std::vector<Corpus> load() const {
    if (formats.size() != 1 && formats.size() != paths.size())
      throw ValidationError("give one --format or one per --corpus", "format");
    if (!names.empty() && names.size() != paths.size())
      throw ValidationError("give one --name per --corpus", "name");
    std::vector<Corpus> out;
    for (std::size_t i = 0; i < paths.size(); ++i)
      out.push_back(load_corpus(paths[i], parse_source_format(formats.size() == 1 ? formats[0] : formats[i]),
                                parse_partition(partition), names.empty() ? std::string{} : names[i]));
    return out;
  }
};

Category category_for(const PipelineProfile& p) {
  if (p.name == "pronouns") return Category::pronoun;
  if (p.name == "marked_words") return Category::marked_word;
  if (p.name == "names") return Category::name;
  return Category::gendered_language;
}

DictFormat infer_dict_format(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".csv") return DictFormat::scored_csv;
  if (ext == ".json" || ext == ".jsonl") return DictFormat::gender_tag_json;
  return DictFormat::categorical_list;
}

struct DictArgs {
  std::vector<std::string> paths;
  std::string format;
  std::string category;
  std::string threshold;

  void add(CLI::App* app, bool required = true) {
    auto* d = app->add_option("--dict", paths, "Dictionary file (repeatable; several are merged)");
    if (required) d->required();
    app->add_option("--dict-format", format,
                    "categorical_list | scored_csv | gender_tag_json | ava_jsonl | pronoun_lists | name_lists "
                    "(default: from the extension)");
    app->add_option("--category", category, "Entry category (default: implied by --profile)");
    app->add_option("--threshold", threshold, "loose | conservative, for scored dictionaries");
  }

  Dictionary load(Category fallback) const {
    std::vector<Dictionary> dicts;
    for (const auto& p : paths) {
      DictionarySpec spec;
      spec.path = p;
      spec.name = spec.path.stem().string();
      spec.format = format.empty() ? infer_dict_format(spec.path) : parse_dict_format(format);
      spec.category = category.empty() ? fallback : parse_category(category);
      if (!threshold.empty()) spec.threshold = threshold;
      dicts.push_back(load_dictionary(spec));
    }
    return dicts.size() == 1 ? dicts.front() : merge(dicts);
  }
};

void write_output(const std::string& data, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << data;
  if (!f) throw IoError("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string chi2_line(const Chi2Result& r) {
  return format_statistic(r.statistic) + " " + std::to_string(r.df) + " " + format_p(r.p) + "\n";
}

std::string dictionary_jsonl(const Dictionary& d) {
  std::string out;
  for (const auto& e : d.entries) {
    ordered_json j;
    j["word"] = e.term;
    j["pattern"] = e.pattern;
    j["gender"] = std::string(gender_code(e.gender));
    j["category"] = std::string(to_string(e.category));
    j["source"] = e.source_id;
    if (e.ambiguous) j["ambiguous"] = true;
    out += j.dump() + "\n";
  }
  return out;
}

Config config_or_env(const std::string& path) {
  if (!path.empty()) return load_config(path);
  if (auto c = config_from_env()) return *c;
  throw ValidationError("no config given (use --config or " + std::string(kConfigEnv) + ")", "config");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gender bias audits of dialogue corpora", "lexaudit"};
  app.require_subcommand(1);

  // ingest
  CorpusArgs ingest_corpus;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Parse a corpus and write it as normalized JSONL");
  ingest_corpus.add(ingest);
  ingest->add_option("--out", ingest_out, "Output file (default: stdout)");

  // stats
  CorpusArgs stats_corpus;
  std::string stats_profile = "gendered_language", stats_out;
  auto* stats = app.add_subcommand("stats", "Token and vocabulary counts for a corpus");
  stats_corpus.add(stats);
  stats->add_option("--profile", stats_profile, "Pipeline profile");
  stats->add_option("--out", stats_out, "Output file (default: stdout)");

  // audit
  CorpusArgs audit_corpus;
  DictArgs audit_dict;
  std::string audit_profile = "gendered_language", ava_path, ava_mode = "remove", audit_out, audit_out_dir,
              audit_fmt = "json", matches_out, top_out, audit_config;
  std::vector<std::string> exclusions;
  unsigned threads = 1;
  std::size_t top_k = 10;
  auto* audit = app.add_subcommand("audit", "Count dictionary hits by gender and partition");
  audit_corpus.add(audit, false);
  audit_dict.add(audit, false);
  audit->add_option("--profile", audit_profile, "Pipeline profile");
  audit->add_option("--ava", ava_path, "AVA file to subtract from the dictionary");
  audit->add_option("--ava-mode", ava_mode, "remove | flag");
  audit->add_option("--exclude", exclusions, "Tokens never counted (repeatable)");
  audit->add_option("--threads", threads, "Worker threads");
  audit->add_option("--out-format", audit_fmt, "json | markdown | csv");
  audit->add_option("--out", audit_out, "Output file (default: stdout)");
  audit->add_option("--out-dir", audit_out_dir, "Write <corpus>_<dictionary>_<profile>.<ext> here");
  audit->add_option("--matches", matches_out, "Also write every match as JSONL");
  audit->add_option("--top", top_k, "Number of top terms for --top-out");
  audit->add_option("--top-out", top_out, "Also write the top terms table");
  audit->add_option("--config", audit_config, "Run every corpus and dictionary of a config file");

  // chi2
  std::vector<double> gof_counts, gof_expected, ind_cells;
  bool no_yates = false;
  std::string chi2_fmt = "plain";
  auto* chi2 = app.add_subcommand("chi2", "Chi-square tests");
  chi2->require_subcommand(1);
  chi2->add_option("--out-format", chi2_fmt, "plain | json | markdown | csv");
  auto* gof = chi2->add_subcommand("gof", "Goodness of fit against uniform or given proportions");
  gof->add_option("counts", gof_counts, "Observed counts")->required()->expected(2, -1);
  gof->add_option("--expected", gof_expected, "Expected proportions")->delimiter(',');
  auto* ind = chi2->add_subcommand("ind", "2x2 independence: a b c d for [[a, b], [c, d]]");
  ind->add_option("cells", ind_cells, "Cells a b c d")->required()->expected(4);
  ind->add_flag("--yates", "Apply the continuity correction (default)");
  ind->add_flag("--no-yates", no_yates, "Skip the continuity correction");

  // ava-extract
  CorpusArgs ext_corpus;
  DictArgs ext_dict;
  std::string ext_out, journal_path, session_id;
  std::size_t samples = 5, window = 5;
  auto* ava_extract = app.add_subcommand(
      "ava-extract", "List ambiguity candidates, or export the AVA file of a rating session with --journal");
  ext_corpus.add(ava_extract, false);
  ext_dict.add(ava_extract, false);
  ava_extract->add_option("--samples", samples, "Example lines per corpus");
  ava_extract->add_option("--window", window, "Context tokens either side");
  ava_extract->add_option("--journal", journal_path, "Session journal to export from");
  ava_extract->add_option("--session", session_id, "Session id to export");
  ava_extract->add_option("--out", ext_out, "Output file (default: stdout)");

  // ava-apply
  DictArgs apply_dict;
  std::string apply_ava, apply_mode = "remove", apply_out, apply_profile = "gendered_language";
  auto* ava_apply = app.add_subcommand("ava-apply", "Remove or flag AVA terms in a dictionary");
  apply_dict.add(ava_apply);
  ava_apply->add_option("--ava", apply_ava, "AVA file")->required();
  ava_apply->add_option("--ava-mode", apply_mode, "remove | flag");
  ava_apply->add_option("--profile", apply_profile, "Profile implying the default category");
  ava_apply->add_option("--out", apply_out, "Output file (default: stdout)");

  // annotate-serve
  std::string serve_config, bind, serve_journal;
  int port = -1;
  bool unsafe = false;
  auto* serve_cmd = app.add_subcommand("annotate-serve", "Serve the annotation API");
  serve_cmd->add_option("--config", serve_config, "Config file (default: $" + std::string(kConfigEnv) + ")");
  serve_cmd->add_option("--bind", bind, "Bind address (non-loopback needs --unsafe-bind)");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--journal", serve_journal, "Session journal");
  serve_cmd->add_flag("--unsafe-bind", unsafe, "Allow a non-loopback bind address");

  // report
  std::vector<std::string> report_inputs;
  std::string report_fmt = "markdown", report_out, report_dir, report_title = "Audit report";
  auto* report = app.add_subcommand("report", "Render audit report JSON files as tables");
  report->add_option("reports", report_inputs, "Audit report JSON files")->required();
  report->add_option("--out-format", report_fmt, "markdown | csv | json");
  report->add_option("--title", report_title, "Document title");
  report->add_option("--out", report_out, "Output file (default: stdout)");
  report->add_option("--out-dir", report_dir, "Write one file per report, named after it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (*ingest) {
      std::string data;
      for (const auto& c : ingest_corpus.load())
        for (const auto& u : c.utterances) {
          ordered_json j;
          j["corpus"] = c.name;
          j["id"] = u.id;
          j["partition"] = std::string(to_string(u.partition));
          j["text"] = u.text;
          j["meta"] = u.meta;
          data += j.dump() + "\n";
        }
      write_output(data, ingest_out, out);
    } else if (*stats) {
      const auto profile = profile_by_name(stats_profile);
      json all = json::array();
      for (const auto& c : stats_corpus.load()) {
        const auto s = corpus_stats(c, profile);
        json parts = json::object();
        for (const auto& [p, n] : s.per_partition_counts) parts[std::string(to_string(p))] = n;
        all.push_back({{"corpus", c.name},
                       {"profile", profile.name},
                       {"utterances", c.utterances.size()},
                       {"total_tokens", s.total_tokens},
                       {"unique_surface", s.unique_surface},
                       {"unique_processed", s.unique_processed},
                       {"per_partition", parts}});
      }
      write_output((all.size() == 1 ? all[0] : all).dump(2) + "\n", stats_out, out);
    } else if (*audit) {
      const Format fmt = parse_format(audit_fmt);
      std::vector<Corpus> corpora;
      std::vector<Dictionary> dictionaries;
      PipelineProfile profile;
      AuditOptions options;
      options.threads = threads;
      std::string out_dir = audit_out_dir;
      if (!audit_config.empty()) {
        const Config cfg = load_config(audit_config);
        Workspace w = load_workspace(cfg);
        corpora = std::move(w.corpora);
        dictionaries = std::move(w.dictionaries);
        profile = w.profile;
        options.ava = std::move(w.ava);
        options.exclusions = w.exclusions;
        options.threads = std::max(threads, cfg.threads);
        if (out_dir.empty()) out_dir = cfg.output_dir.string();
      } else {
        if (audit_corpus.paths.empty()) throw ValidationError("--corpus is required", "corpus");
        if (audit_dict.paths.empty()) throw ValidationError("--dict is required", "dict");
        profile = profile_by_name(audit_profile);
        corpora = audit_corpus.load();
        dictionaries.push_back(audit_dict.load(category_for(profile)));
        if (!ava_path.empty()) options.ava = AvaOption{load_ava(ava_path), parse_ava_mode(ava_mode)};
        options.exclusions = exclusions;
      }
      for (const auto& d : dictionaries) {
        check_compatible(d, profile);
        for (const auto& c : corpora) {
          const MatchSet m = run_audit(c, d, profile, options);
          const AuditReport r = frequency_table(m);
          const std::string rendered = render_audit(r, fmt);
          if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            write_output(rendered, (std::filesystem::path(out_dir) / output_filename(r, fmt)).string(), out);
          } else {
            write_output(rendered, audit_out, out);
          }
          if (!matches_out.empty()) write_output(matches_to_jsonl(m), matches_out, out);
          if (!top_out.empty()) write_output(render_top_terms(top_terms(m, top_k), fmt), top_out, out);
        }
      }
    } else if (*chi2) {
      LabeledChi2 row;
      if (*gof) {
        row = {"gof", chi2_gof(gof_counts, gof_expected)};
      } else {
        const std::array<std::array<double, 2>, 2> t{{{ind_cells[0], ind_cells[1]}, {ind_cells[2], ind_cells[3]}}};
        row = {"ind", chi2_2x2(t, !no_yates)};
      }
      if (chi2_fmt == "plain")
        out << chi2_line(row.result);
      else
        out << render_chi2(std::span<const LabeledChi2>(&row, 1), parse_format(chi2_fmt));
    } else if (*ava_extract) {
      if (!journal_path.empty()) {
        if (session_id.empty()) throw ValidationError("--session is required with --journal", "session");
        const auto events = Journal(journal_path).read();
        const auto sessions = replay(events);
        auto it = sessions.find(session_id);
        if (it == sessions.end()) throw ValidationError("no session '" + session_id + "' in the journal", "session");
        write_output(export_ava(it->second), ext_out, out);
      } else {
        if (ext_corpus.paths.empty()) throw ValidationError("--corpus is required", "corpus");
        if (ext_dict.paths.empty()) throw ValidationError("--dict is required", "dict");
        Workspace w;
        w.corpora = ext_corpus.load();
        w.dictionaries.push_back(ext_dict.load(Category::gendered_language));
        w.profile = PipelineProfile::gendered_language();
        json list = json::array();
        for (const auto& c : candidates_for(w, {samples, window})) list.push_back(to_json(c));
        write_output(list.dump(2) + "\n", ext_out, out);
      }
    } else if (*ava_apply) {
      const auto profile = profile_by_name(apply_profile);
      const Dictionary d = apply_dict.load(category_for(profile));
      const auto result = subtract(d, load_ava(apply_ava), parse_ava_mode(apply_mode));
      err << "entries: " << d.total() << " -> " << result.dictionary.total()
          << ", AVA terms not in dictionary: " << result.unmatched_terms << "\n";
      write_output(dictionary_jsonl(result.dictionary), apply_out, out);
    } else if (*serve_cmd) {
      Config cfg = config_or_env(serve_config);
      if (!bind.empty()) cfg.service.bind = bind;
      if (port >= 0) cfg.service.port = port;
      if (!serve_journal.empty()) cfg.service.journal = serve_journal;
      if (unsafe) cfg.service.unsafe_bind = true;
      const Workspace w = load_workspace(cfg);
      err << "serving on http://" << cfg.service.bind << ":" << cfg.service.port << "\n";
      serve(cfg, w);
    } else if (*report) {
      const Format fmt = parse_format(report_fmt);
      ReportDocument doc{report_title, fmt, {}};
      for (const auto& path : report_inputs) {
        const AuditReport r = audit_report_from_json(parse_json_file(path));
        if (!report_dir.empty()) {
          std::filesystem::create_directories(report_dir);
          write_output(render_audit(r, fmt), (std::filesystem::path(report_dir) / output_filename(r, fmt)).string(),
                       out);
        }
        doc.sections.push_back({"audit", std::filesystem::path(path).stem().string(), render_audit(r, fmt)});
      }
      if (report_dir.empty()) write_output(render(doc), report_out, out);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " (" << e.field() << ")";
    err << "\n";
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConflictError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace lexaudit
