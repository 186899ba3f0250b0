#include "fairaudit/fetch.hpp"

#include "fairaudit/errors.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

namespace fairaudit {

namespace {

struct ParsedUrl {
    std::string base; // scheme://host[:port]
    std::string path; // leading slash
};

ParsedUrl parse_url(const std::string& url) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw DataError("manifest: url without scheme: '" + url + "'");
    std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string hex_digest(const unsigned char* md, unsigned len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(digits[md[i] >> 4]);
        out.push_back(digits[md[i] & 0xf]);
    }
    return out;
}

void download(const std::string& url, const std::string& dest) {
    ParsedUrl parsed = parse_url(url);
    httplib::Client client(parsed.base);
    client.set_connection_timeout(15, 0);
    client.set_read_timeout(120, 0);
    client.set_follow_location(true);

    std::ofstream out(dest, std::ios::binary);
    if (!out) throw DataError("cannot write '" + dest + "'");
    httplib::Result res = client.Get(
        parsed.path, [&](const char* data, std::size_t len) {
            out.write(data, std::streamsize(len));
            return bool(out);
        });
    out.close();
    if (!res) {
        std::remove(dest.c_str());
        throw DataError("download failed: " + url + " (" +
                        httplib::to_string(res.error()) + ")");
    }
    if (res->status != 200) {
        std::remove(dest.c_str());
        throw DataError("download failed: " + url + " (HTTP " +
                        std::to_string(res->status) + ")");
    }
}

} // namespace

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw DataError("sha256: cannot initialize digest");

    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buf, std::size_t(got)) != 1)
            throw DataError("sha256: digest update failed");
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw DataError("sha256: digest finalization failed");
    return hex_digest(md, len);
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("manifest '" + path + "': " + e.what());
    }
    if (!doc.is_object() || doc.value("version", 0) != 1)
        throw DataError("manifest '" + path + "': unsupported version");
    if (!doc.contains("files") || !doc["files"].is_array())
        throw DataError("manifest '" + path + "': missing files array");

    std::vector<ManifestEntry> entries;
    for (const nlohmann::json& item : doc["files"]) {
        ManifestEntry entry;
        try {
            entry.dataset = item.at("dataset").get<std::string>();
            entry.filename = item.at("filename").get<std::string>();
            entry.url = item.at("url").get<std::string>();
            entry.sha256 = item.at("sha256").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError("manifest '" + path + "': " + e.what());
        }
        if (entry.sha256.size() != 64)
            throw DataError("manifest '" + path + "': bad sha256 for " + entry.filename);
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<FetchResult> fetch_dataset(const std::vector<ManifestEntry>& manifest,
                                       const std::string& dataset,
                                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::vector<const ManifestEntry*> wanted;
    for (const ManifestEntry& entry : manifest)
        if (entry.dataset == dataset) wanted.push_back(&entry);
    if (wanted.empty())
        throw UsageError("fetch: no manifest entries for dataset '" + dataset + "'");

    fs::path dir = fs::path(out_dir) / dataset;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create '" + dir.string() + "'");

    std::vector<FetchResult> results;
    for (const ManifestEntry* entry : wanted) {
        fs::path dest = dir / entry->filename;
        if (fs::exists(dest) && sha256_file(dest.string()) == entry->sha256) {
            results.push_back({dest.string(), false});
            continue;
        }
        fs::path tmp = dest;
        tmp += ".part";
        download(entry->url, tmp.string());
        std::string actual = sha256_file(tmp.string());
        if (actual != entry->sha256) {
            fs::remove(tmp, ec);
            throw DataError("checksum mismatch for " + entry->filename +
                            ": expected " + entry->sha256 + ", got " + actual);
        }
        fs::rename(tmp, dest, ec);
        if (ec) throw DataError("cannot move '" + tmp.string() + "' into place");
        results.push_back({dest.string(), true});
    }
    return results;
}

} // namespace fairaudit
