#include "argrank/manifest.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "argrank/digest.hpp"
#include "argrank/errors.hpp"

namespace argrank::cli {

using nlohmann::json;

namespace {

std::string now_utc_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

RunManifest::RunManifest(std::string dir) : dir_(std::move(dir)) {
    const auto path = std::filesystem::path(dir_) / "manifest.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": bad manifest: " + e.what());
    }
    if (doc.contains("meta")) {
        for (const auto& [key, value] : doc["meta"].items()) {
            meta_[key] = value.get<std::string>();
        }
    }
    for (const auto& entry : doc.value("artifacts", json::array())) {
        entries_.push_back(Entry{
            entry.at("path").get<std::string>(),
            entry.at("sha256").get<std::string>(),
            entry.at("stage").get<std::string>(),
            entry.at("created_utc").get<std::string>(),
        });
    }
}

void RunManifest::record(const std::string& stage, const std::string& relative_path) {
    const auto full = std::filesystem::path(dir_) / relative_path;
    Entry entry{relative_path, sha256_file(full.string()), stage, now_utc_iso8601()};
    for (auto& existing : entries_) {
        if (existing.path == relative_path) {
            existing = std::move(entry);
            return;
        }
    }
    entries_.push_back(std::move(entry));
}

void RunManifest::set_meta(const std::string& key, const std::string& value) {
    meta_[key] = value;
}

void RunManifest::save() const {
    json doc;
    doc["meta"] = meta_;
    json artifacts = json::array();
    for (const auto& entry : entries_) {
        artifacts.push_back(json{
            {"path", entry.path},
            {"sha256", entry.sha256},
            {"stage", entry.stage},
            {"created_utc", entry.created_utc},
        });
    }
    doc["artifacts"] = artifacts;

    std::filesystem::create_directories(dir_);
    const auto path = std::filesystem::path(dir_) / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

}  // namespace argrank::cli
