#ifndef FAIRAUDIT_FETCH_HPP
#define FAIRAUDIT_FETCH_HPP

#include <string>
#include <vector>

namespace fairaudit {

/// One pinned source file: where it lives, where it lands, what it must
/// hash to. Datasets may span several files.
struct ManifestEntry {
    std::string dataset;
    std::string filename;
    std::string url;
    std::string sha256; // lower-case hex
};

/// Read a manifest JSON ({"version":1,"files":[...]}). Throws DataError on
/// malformed content or an unsupported version.
std::vector<ManifestEntry> load_manifest(const std::string& path);

/// Lower-case hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::string& path);

struct FetchResult {
    std::string path;
    bool downloaded = false; // false = an already-verified copy was kept
};

/// Materialize every manifest entry for `dataset` under out_dir/<dataset>/.
/// Existing files that already match their digest are left alone (no network
/// traffic); anything else is downloaded to a temporary file, verified, and
/// moved into place. A digest mismatch after download raises DataError naming
/// both digests. An unknown dataset raises UsageError.
std::vector<FetchResult> fetch_dataset(const std::vector<ManifestEntry>& manifest,
                                       const std::string& dataset,
                                       const std::string& out_dir);

} // namespace fairaudit

#endif
