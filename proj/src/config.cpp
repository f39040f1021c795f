#include "lexaudit/config.hpp"

#include <cstdlib>
#include <fstream>

#include "lexaudit/error.hpp"

namespace lexaudit {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

template <typename T>
T get(const json& j, const char* key, const std::string& field) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("missing or mistyped '" + std::string(key) + "'", field);
  }
}

}  // namespace

Config parse_config(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object", "config");
  Config c;

  for (const auto& e : j.value("corpora", json::array())) {
    CorpusSpec s;
    s.path = resolve(base, get<std::string>(e, "path", "corpora.path"));
    s.format = parse_source_format(get<std::string>(e, "format", "corpora.format"));
    s.name = e.value("name", s.path.stem().string());
    if (e.contains("partition")) s.partition = parse_partition(get<std::string>(e, "partition", "corpora.partition"));
    c.corpora.push_back(std::move(s));
  }
  for (const auto& e : j.value("dictionaries", json::array())) {
    DictionarySpec s;
    s.path = resolve(base, get<std::string>(e, "path", "dictionaries.path"));
    s.format = parse_dict_format(get<std::string>(e, "format", "dictionaries.format"));
    s.name = e.value("name", s.path.stem().string());
    if (e.contains("category")) s.category = parse_category(get<std::string>(e, "category", "dictionaries.category"));
    if (e.contains("threshold")) {
      s.threshold = get<std::string>(e, "threshold", "dictionaries.threshold");
      threshold_by_name(*s.threshold);
    }
    c.dictionaries.push_back(std::move(s));
  }

  c.profile = j.value("profile", c.profile);
  profile_by_name(c.profile);
  if (j.contains("ava")) {
    const auto& a = j["ava"];
    c.ava = resolve(base, get<std::string>(a, "path", "ava.path"));
    if (a.contains("mode")) c.ava_mode = parse_ava_mode(get<std::string>(a, "mode", "ava.mode"));
  }
  if (j.contains("exclusions")) c.exclusions = get<std::vector<std::string>>(j, "exclusions", "exclusions");
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (o.contains("format")) c.output_format = parse_format(get<std::string>(o, "format", "output.format"));
    if (o.contains("dir")) c.output_dir = resolve(base, get<std::string>(o, "dir", "output.dir"));
  }
  if (j.contains("threads")) c.threads = get<unsigned>(j, "threads", "threads");
  if (j.contains("service")) {
    const auto& s = j["service"];
    c.service.bind = s.value("bind", c.service.bind);
    c.service.port = s.value("port", c.service.port);
    c.service.unsafe_bind = s.value("unsafe_bind", false);
    if (s.contains("journal")) c.service.journal = resolve(base, get<std::string>(s, "journal", "service.journal"));
  }
  if (c.service.port < 0 || c.service.port > 65535) throw ValidationError("port out of range", "service.port");
  if (!is_loopback(c.service.bind) && !c.service.unsafe_bind)
    throw ValidationError("binding to '" + c.service.bind + "' requires unsafe_bind", "service.bind");
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

std::optional<Config> config_from_env() {
  const char* p = std::getenv(kConfigEnv);
  if (!p || !*p) return std::nullopt;
  return load_config(p);
}

bool is_loopback(const std::string& a) {
  return a == "localhost" || a == "::1" || a.rfind("127.", 0) == 0;
}

Dictionary load_dictionary(const DictionarySpec& spec) {
  LoadOptions opts;
  opts.name = spec.name;
  opts.category = spec.category;
  Dictionary d = load_dictionary(spec.path, spec.format, opts).dictionary;
  if (spec.threshold) {
    d = apply_threshold(d, threshold_by_name(*spec.threshold));
    d.name = spec.name;
  }
  return d;
}

Workspace load_workspace(const Config& c) {
  Workspace w;
  w.profile = profile_by_name(c.profile);
  for (const auto& s : c.corpora) w.corpora.push_back(load_corpus(s.path, s.format, s.partition, s.name));
  for (const auto& s : c.dictionaries) {
    w.dictionaries.push_back(load_dictionary(s));
    check_compatible(w.dictionaries.back(), w.profile);
  }
  if (c.ava) w.ava = AvaOption{load_ava(*c.ava), c.ava_mode};
  w.exclusions = c.exclusions;
  return w;
}

}  // namespace lexaudit
