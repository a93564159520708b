#include <openssl/evp.h>

#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "flowcheck/checker.hpp"
#include "flowcheck/typing_report.hpp"

namespace flowcheck::checker {

std::string program_hash(const lang::Command& c) {
  std::string text = lang::to_source(c);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

TypingCache::TypingCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::filesystem::path TypingCache::path_for(const std::string& hash) const { return dir_ / (hash + ".json"); }

void TypingCache::store(const lang::Command& c, const typing::DepEnv& g) const {
  std::string hash = program_hash(c);
  nlohmann::json j{{"hash", hash}, {"source", lang::to_source(c)}, {"typing", typing::typing_to_json(g)}};

  static std::atomic<unsigned long> counter{0};
  std::ostringstream tmp_name;
  tmp_name << hash << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
  auto tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path_for(hash));
}

std::optional<typing::DepEnv> TypingCache::load(const lang::Command& c) const {
  std::string hash = program_hash(c);
  auto path = path_for(hash);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw StaleCacheError("unreadable cache entry " + path.string() + ": " + e.what());
  }
  if (j.value("hash", "") != hash || j.value("source", "") != lang::to_source(c))
    throw StaleCacheError("cache entry " + path.string() + " does not match the program");
  auto g = typing::typing_from_json(j.at("typing"));
  if (!(*g.universe() == *typing::VarUniverse::for_program(c)))
    throw StaleCacheError("cache entry " + path.string() + " has a different typing universe");
  return g;
}

typing::DepEnv TypingCache::typing_for(const lang::Command& c, bool* hit) const {
  if (auto g = load(c)) {
    if (hit) *hit = true;
    return *g;
  }
  if (hit) *hit = false;
  auto g = typing::infer(c);
  store(c, g);
  return g;
}

}  // namespace flowcheck::checker
