#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexaudit/audit.hpp"
#include "lexaudit/corpus.hpp"
#include "lexaudit/lexicon.hpp"
#include "lexaudit/report.hpp"

namespace lexaudit {

/// Environment variable naming the config file.
inline constexpr const char* kConfigEnv = "LEXAUDIT_CONFIG";

struct CorpusSpec {
  std::string name;
  std::filesystem::path path;
  SourceFormat format = SourceFormat::massive_jsonl;
  Partition partition = Partition::train;  // ReDial only
};

struct DictionarySpec {
  std::string name;
  std::filesystem::path path;
  DictFormat format = DictFormat::categorical_list;
  std::optional<Category> category;
  std::optional<std::string> threshold;  // scored sources: "loose" | "conservative"
};

struct ServiceSpec {
  std::string bind = "127.0.0.1";
  int port = 8080;
  bool unsafe_bind = false;  // required for any non-loopback address
  std::filesystem::path journal = "sessions.jsonl";
};

/// Run configuration. Paths in the file are relative to the file itself.
struct Config {
  std::vector<CorpusSpec> corpora;
  std::vector<DictionarySpec> dictionaries;
  std::string profile = "gendered_language";
  std::optional<std::filesystem::path> ava;
  AvaMode ava_mode = AvaMode::remove;
  std::vector<std::string> exclusions;
  Format output_format = Format::json;
  std::filesystem::path output_dir = ".";
  unsigned threads = 1;
  ServiceSpec service;
};

/// Throws ParseError for malformed JSON and ValidationError for bad values.
/// Does not touch the referenced files.
Config parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);
/// From LEXAUDIT_CONFIG; nullopt when the variable is unset.
std::optional<Config> config_from_env();

/// True for 127.0.0.0/8, ::1 and "localhost".
bool is_loopback(const std::string& address);

/// Everything a config references, loaded and cross-checked.
struct Workspace {
  std::vector<Corpus> corpora;
  std::vector<Dictionary> dictionaries;
  PipelineProfile profile;
  std::optional<AvaOption> ava;
  std::vector<std::string> exclusions;
};

/// Loads every corpus, dictionary and AVA file and validates profile and
/// dictionary compatibility. Throws IoError, ParseError, ValidationError or
/// ConfigError.
Workspace load_workspace(const Config& c);

/// Dictionary from a spec, applying its threshold policy if any.
Dictionary load_dictionary(const DictionarySpec& spec);

}  // namespace lexaudit
