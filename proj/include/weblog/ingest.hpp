#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "weblog/core.hpp"

namespace weblog {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RawLogLine {
    std::string host;
    std::int64_t timestamp;  // epoch seconds, offset applied
    std::string path;        // verbatim from the request line
    int status;
    std::int64_t size;  // -1 when absent ("-")
};

enum class SkipReason { bad_format, bad_timestamp, bad_request };

struct ParsedLine {
    std::optional<RawLogLine> line;  // absent -> skipped
    SkipReason reason = SkipReason::bad_format;
};

/// NCSA Common/Combined Log Format. Malformed lines come back as
/// skip-markers with a reason; never throws on content.
ParsedLine parse_line(std::string_view text);

/// "[dd/Mon/yyyy:HH:MM:SS +zzzz]" body -> epoch seconds.
std::optional<std::int64_t> parse_ncsa_timestamp(std::string_view text);

struct UrlFilter {
    std::set<std::string> accepted_extensions = {"html", "htm", "shtml", "shtm", "cfm",
                                                 "php",  "asp", "aspx",  "jsp",  "txt"};
};

/// Query stripped, directory paths mapped to their index.html, extension
/// lowercased and checked against the filter. nullopt = rejected.
std::optional<std::string> normalize_and_filter(std::string_view path, const UrlFilter& filter);

/// Dense insertion-ordered raw-key -> id maps, reloadable so a second pass
/// assigns identical ids.
class AnonymizerState {
public:
    std::uint32_t user_id(const std::string& host);
    std::uint32_t url_id(const std::string& path);

    const std::vector<std::string>& users() const { return users_; }
    const std::vector<std::string>& urls() const { return urls_; }

    void add_user(std::string host);  // for deserialization
    void add_url(std::string path);

private:
    std::vector<std::string> users_, urls_;
    std::unordered_map<std::string, std::uint32_t> user_ids_, url_ids_;
};

struct IngestOptions {
    UrlFilter filter;
    bool keep_error_status = false;  // retain status >= 400 (attack profiles)
    bool strip_query = true;
};

struct IngestReport {
    std::uint64_t lines_read = 0;
    std::uint64_t events = 0;
    std::uint64_t rejected_by_filter = 0;
    std::uint64_t skipped_malformed = 0;
    std::uint64_t error_status_dropped = 0;
};

/// Parses NCSA files (gzip accepted via .gz suffix) into a store.
std::pair<EventStore, IngestReport> ingest_files(const std::vector<std::string>& paths,
                                                 const IngestOptions& options, AnonymizerState& state);

/// Pre-anonymized TSV: user_id, url_id, timestamp per line.
EventStore load_tsv(const std::string& path);

/// Binary store file: "WLDY" magic, version, events, then the anonymizer
/// string tables (possibly empty). Round-trips bit-exactly.
void save_store(const std::string& path, const EventStore& store,
                const AnonymizerState* state = nullptr);
EventStore load_store(const std::string& path, AnonymizerState* state = nullptr);

}  // namespace weblog
