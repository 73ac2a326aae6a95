#pragma once

#include <map>
#include <string>
#include <vector>

namespace argrank::cli {

// Run manifest: every artifact a pipeline stage emits is recorded here with
// its content digest, so a run can be audited file by file. Lives as
// manifest.json inside the output directory; re-recording a path replaces
// its entry (exactly one manifest references each artifact).
class RunManifest {
public:
    struct Entry {
        std::string path;  // relative to the manifest directory
        std::string sha256;
        std::string stage;
        std::string created_utc;
    };

    explicit RunManifest(std::string dir);

    // Computes the digest of dir/relative_path and upserts its entry.
    void record(const std::string& stage, const std::string& relative_path);

    // Free-form run metadata (config digest, seeds, strategy, ...). Secrets
    // never go in here.
    void set_meta(const std::string& key, const std::string& value);

    const std::vector<Entry>& entries() const { return entries_; }
    const std::map<std::string, std::string>& meta() const { return meta_; }

    void save() const;

private:
    std::string dir_;
    std::map<std::string, std::string> meta_;
    std::vector<Entry> entries_;
};

}  // namespace argrank::cli
