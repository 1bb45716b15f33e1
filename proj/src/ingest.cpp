#include "weblog/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace weblog {

namespace {

constexpr std::array<const char*, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                 "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// days since epoch from a civil date (Howard Hinnant's algorithm)
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = unsigned(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + std::int64_t(doe) - 719468;
}

bool to_int(std::string_view s, std::int64_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::optional<std::int64_t> parse_ncsa_timestamp(std::string_view t) {
    // dd/Mon/yyyy:HH:MM:SS +zzzz
    if (t.size() < 26 || t[2] != '/' || t[6] != '/' || t[11] != ':' || t[14] != ':' || t[17] != ':' ||
        t[20] != ' ')
        return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len, std::int64_t& out) {
        return to_int(t.substr(pos, len), out);
    };
    std::int64_t day, year, hh, mm, ss;
    if (!num(0, 2, day) || !num(7, 4, year) || !num(12, 2, hh) || !num(15, 2, mm) || !num(18, 2, ss))
        return std::nullopt;
    int month = 0;
    for (int i = 0; i < 12; ++i)
        if (t.substr(3, 3) == kMonths[std::size_t(i)]) month = i + 1;
    if (month == 0) return std::nullopt;
    char sign = t[21];
    std::int64_t oh, om;
    if ((sign != '+' && sign != '-') || !num(22, 2, oh) || !num(24, 2, om)) return std::nullopt;
    if (day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    std::int64_t offset = (oh * 3600 + om * 60) * (sign == '-' ? -1 : 1);
    std::int64_t local = days_from_civil(int(year), unsigned(month), unsigned(day)) * 86400 +
                         hh * 3600 + mm * 60 + ss;
    return local - offset;
}

ParsedLine parse_line(std::string_view text) {
    ParsedLine out;
    // host ident authuser [timestamp] "request" status size ...
    std::size_t sp1 = text.find(' ');
    if (sp1 == std::string_view::npos || sp1 == 0) return out;
    std::string_view host = text.substr(0, sp1);

    std::size_t lb = text.find('[', sp1);
    std::size_t rb = lb == std::string_view::npos ? std::string_view::npos : text.find(']', lb);
    if (lb == std::string_view::npos || rb == std::string_view::npos) {
        out.reason = SkipReason::bad_timestamp;
        return out;
    }
    auto ts = parse_ncsa_timestamp(text.substr(lb + 1, rb - lb - 1));
    if (!ts) {
        out.reason = SkipReason::bad_timestamp;
        return out;
    }

    std::size_t q1 = text.find('"', rb);
    std::size_t q2 = q1 == std::string_view::npos ? std::string_view::npos : text.find('"', q1 + 1);
    if (q1 == std::string_view::npos || q2 == std::string_view::npos) {
        out.reason = SkipReason::bad_request;
        return out;
    }
    std::string_view request = text.substr(q1 + 1, q2 - q1 - 1);
    // method path protocol, exactly three parts
    std::size_t rsp1 = request.find(' ');
    std::size_t rsp2 = rsp1 == std::string_view::npos ? std::string_view::npos : request.find(' ', rsp1 + 1);
    if (rsp1 == std::string_view::npos || rsp2 == std::string_view::npos ||
        request.find(' ', rsp2 + 1) != std::string_view::npos || rsp2 == rsp1 + 1) {
        out.reason = SkipReason::bad_request;
        return out;
    }
    std::string_view path = request.substr(rsp1 + 1, rsp2 - rsp1 - 1);

    std::string_view rest = text.substr(q2 + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    std::size_t sp = rest.find(' ');
    std::string_view status_str = sp == std::string_view::npos ? rest : rest.substr(0, sp);
    std::int64_t status;
    if (!to_int(status_str, status) || status < 100 || status > 599) return out;
    std::int64_t size = -1;
    if (sp != std::string_view::npos) {
        std::string_view size_str = rest.substr(sp + 1);
        std::size_t end = size_str.find(' ');
        if (end != std::string_view::npos) size_str = size_str.substr(0, end);
        if (size_str != "-") {
            if (!to_int(size_str, size)) size = -1;
        }
    }

    out.line = RawLogLine{std::string(host), *ts, std::string(path), int(status), size};
    return out;
}

std::optional<std::string> normalize_and_filter(std::string_view path, const UrlFilter& filter) {
    if (path.empty()) return std::nullopt;
    std::size_t q = path.find('?');
    std::string norm(path.substr(0, q));
    if (norm.empty()) return std::nullopt;
    if (norm.back() == '/') norm += "index.html";  // directory index

    std::size_t slash = norm.rfind('/');
    std::size_t dot = norm.rfind('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return std::nullopt;
    for (std::size_t i = dot + 1; i < norm.size(); ++i)
        norm[i] = char(std::tolower(static_cast<unsigned char>(norm[i])));
    std::string ext = norm.substr(dot + 1);
    if (!filter.accepted_extensions.contains(ext)) return std::nullopt;
    return norm;
}

std::uint32_t AnonymizerState::user_id(const std::string& host) {
    auto [it, fresh] = user_ids_.try_emplace(host, std::uint32_t(users_.size()));
    if (fresh) users_.push_back(host);
    return it->second;
}

std::uint32_t AnonymizerState::url_id(const std::string& path) {
    auto [it, fresh] = url_ids_.try_emplace(path, std::uint32_t(urls_.size()));
    if (fresh) urls_.push_back(path);
    return it->second;
}

void AnonymizerState::add_user(std::string host) {
    user_ids_.emplace(host, std::uint32_t(users_.size()));
    users_.push_back(std::move(host));
}

void AnonymizerState::add_url(std::string path) {
    url_ids_.emplace(path, std::uint32_t(urls_.size()));
    urls_.push_back(std::move(path));
}

namespace {

// Line reader over plain or gzip files (zlib handles both transparently).
class LineReader {
public:
    explicit LineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw IoError("cannot open " + path);
    }
    ~LineReader() {
        if (file_) gzclose(file_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        line.clear();
        char buf[65536];
        for (;;) {
            if (!gzgets(file_, buf, sizeof buf)) return !line.empty();
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
        }
    }

private:
    gzFile file_;
};

}  // namespace

std::pair<EventStore, IngestReport> ingest_files(const std::vector<std::string>& paths,
                                                 const IngestOptions& options, AnonymizerState& state) {
    IngestReport report;
    std::vector<ClickEvent> events;
    std::string line;
    for (const auto& path : paths) {
        LineReader reader(path);
        while (reader.next(line)) {
            report.lines_read++;
            ParsedLine parsed = parse_line(line);
            if (!parsed.line) {
                report.skipped_malformed++;
                continue;
            }
            if (!options.keep_error_status && parsed.line->status >= 400) {
                report.error_status_dropped++;
                continue;
            }
            std::string_view raw = parsed.line->path;
            std::optional<std::string> norm = normalize_and_filter(raw, options.filter);
            if (norm && !options.strip_query) norm = std::string(raw);  // query kept in page identity
            if (!norm) {
                report.rejected_by_filter++;
                continue;
            }
            events.push_back({state.user_id(parsed.line->host), state.url_id(*norm),
                              parsed.line->timestamp});
            report.events++;
        }
    }
    if (events.empty()) throw EmptyDataset();
    return {build_store(std::move(events)), report};
}

EventStore load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<ClickEvent> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        std::int64_t user, url, ts;
        if (t1 == std::string::npos || t2 == std::string::npos ||
            !to_int(std::string_view(line).substr(0, t1), user) ||
            !to_int(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), url) ||
            !to_int(std::string_view(line).substr(t2 + 1), ts))
            throw IoError("malformed TSV line in " + path);
        events.push_back({std::uint32_t(user), std::uint32_t(url), ts});
    }
    if (events.empty()) throw EmptyDataset();
    return build_store(std::move(events));
}

namespace {

constexpr char kMagic[4] = {'W', 'L', 'D', 'Y'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));  // little-endian hosts only
    out.append(buf, sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError("truncated store file");
    return v;
}

void put_table(std::string& out, const std::vector<std::string>& table) {
    put<std::uint64_t>(out, table.size());
    for (const auto& s : table) {
        put<std::uint32_t>(out, std::uint32_t(s.size()));
        out.append(s);
    }
}

}  // namespace

void save_store(const std::string& path, const EventStore& store, const AnonymizerState* state) {
    if (path.empty()) throw IoError("save_store: empty path");
    std::string out;
    out.reserve(32 + store.size() * 16);
    out.append(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, store.size());
    put<std::int64_t>(out, store.t_start());
    put<std::int64_t>(out, store.t_end());
    for (const auto& e : store.events()) {
        put<std::uint32_t>(out, e.user_id);
        put<std::uint32_t>(out, e.url_id);
        put<std::uint64_t>(out, std::uint64_t(e.timestamp));
    }
    static const std::vector<std::string> kEmpty;
    put_table(out, state ? state->users() : kEmpty);
    put_table(out, state ? state->urls() : kEmpty);

    // atomic: write temp, then rename
    std::string tmp = path + ".tmp";
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp);
    f.write(out.data(), std::streamsize(out.size()));
    f.close();
    if (!f) throw IoError("write failed for " + tmp);
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IoError("rename failed for " + path);
}

EventStore load_store(const std::string& path, AnonymizerState* state) {
    if (path.empty()) throw IoError("load_store: empty path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a store file: " + path);
    std::uint32_t version = get<std::uint32_t>(in);
    if (version != kVersion) throw IoError("unsupported store version in " + path);
    std::uint64_t n = get<std::uint64_t>(in);
    get<std::int64_t>(in);  // t_start/t_end are derived on load
    get<std::int64_t>(in);
    std::vector<ClickEvent> events;
    events.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint32_t user = get<std::uint32_t>(in);
        std::uint32_t url = get<std::uint32_t>(in);
        std::int64_t t = std::int64_t(get<std::uint64_t>(in));
        events.push_back({user, url, t});
    }
    auto read_table = [&](auto add) {
        std::uint64_t count = get<std::uint64_t>(in);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint32_t len = get<std::uint32_t>(in);
            std::string s(len, '\0');
            in.read(s.data(), len);
            if (!in) throw IoError("truncated store file");
            add(std::move(s));
        }
    };
    if (state) {
        read_table([&](std::string s) { state->add_user(std::move(s)); });
        read_table([&](std::string s) { state->add_url(std::move(s)); });
    }
    return build_store(std::move(events));
}

}  // namespace weblog
