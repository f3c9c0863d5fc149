#include "mediaflu/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "mediaflu/error.hpp"

namespace mediaflu {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && std::string(trim(cur)).empty()) {
      quoted = was_quoted = true;
      cur.clear();
    } else if (c == ',') {
      out.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError(ErrorKind::Parse, lineno, "unterminated quote");
  out.push_back(was_quoted ? cur : std::string(trim(cur)));
  return out;
}

std::string at_line(const std::string& source, std::size_t lineno) {
  return source + ":" + std::to_string(lineno) + ": ";
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_long(std::string_view s, long& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"#") == std::string::npos && trim(s) == s &&
      !s.empty())
    return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

DataTable parse_csv_text(std::string_view text, SeriesKind kind,
                         std::string source) {
  DataTable t;
  t.kind = kind;
  t.source = source;
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
    text.remove_prefix(3);

  std::set<std::pair<std::string, long>> keys;
  bool header_seen = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto f = split_fields(line, lineno);
    if (!header_seen) {
      if (f.size() != 3 || f[0] != "season" || f[1] != "week" || f[2] != "value") {
        throw ParseError(ErrorKind::Schema, lineno,
                         at_line(source, lineno) +
                             "expected header \"season,week,value\"");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 3) {
      throw ParseError(ErrorKind::Schema, lineno,
                       at_line(source, lineno) + "expected 3 fields, found " +
                           std::to_string(f.size()));
    }
    DataRow row;
    row.season = f[0];
    row.week_label = f[1];
    if (row.season.empty())
      throw ParseError(ErrorKind::Parse, lineno,
                       at_line(source, lineno) + "empty season label");
    if (!parse_long(row.week_label, row.week))
      throw ParseError(ErrorKind::Parse, lineno,
                       at_line(source, lineno) + "week \"" + f[1] +
                           "\" is not an integer");
    if (!parse_double(f[2], row.value) || !std::isfinite(row.value))
      throw ParseError(ErrorKind::Parse, lineno,
                       at_line(source, lineno) + "value \"" + f[2] +
                           "\" is not a finite number");
    if (row.value < 0.0)
      throw ParseError(ErrorKind::Parse, lineno,
                       at_line(source, lineno) + "negative value");
    if (!keys.emplace(row.season, row.week).second)
      throw ParseError(ErrorKind::Duplicate, lineno,
                       at_line(source, lineno) + "duplicate key (" +
                           row.season + ", " + row.week_label + ")");
    t.rows.push_back(std::move(row));
  }
  if (!header_seen)
    throw ParseError(ErrorKind::Schema, lineno == 0 ? 1 : lineno,
                     at_line(source, lineno == 0 ? 1 : lineno) +
                         "missing header \"season,week,value\"");
  return t;
}

DataTable parse_csv(const std::filesystem::path& path, SeriesKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv_text(ss.str(), kind, path.string());
}

std::string serialize_csv(const DataTable& table) {
  std::string out = "season,week,value\n";
  char buf[64];
  for (const DataRow& r : table.rows) {
    const auto res = std::to_chars(buf, buf + sizeof buf, r.value);
    out += quote_if_needed(r.season) + "," + quote_if_needed(r.week_label) +
           "," + std::string(buf, res.ptr) + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<WeeklySeries> split_seasons(const DataTable& table) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const DataRow*>> by_season;
  for (const DataRow& r : table.rows) {
    auto& v = by_season[r.season];
    if (v.empty()) order.push_back(r.season);
    v.push_back(&r);
  }
  std::vector<WeeklySeries> out;
  for (const std::string& season : order) {
    auto rows = by_season[season];
    std::stable_sort(rows.begin(), rows.end(),
                     [](const DataRow* a, const DataRow* b) {
                       return a->week < b->week;
                     });
    WeeklySeries s;
    s.season = season;
    s.kind = table.kind;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s.week_labels.push_back(rows[i]->week_label);
      s.week_index.push_back(rows[i]->week);
      s.values.push_back(rows[i]->value);
      if (i > 0 && rows[i]->week != rows[i - 1]->week + 1) s.has_gaps = true;
    }
    out.push_back(std::move(s));
  }
  return out;
}

PairedSeries join_engagement(const WeeklySeries& ili,
                             const WeeklySeries& retweets) {
  if (ili.season != retweets.season) {
    throw Error(ErrorKind::ComparisonMismatch,
                "joining season " + ili.season + " with " + retweets.season);
  }
  std::map<std::string, std::size_t> rt_at;
  for (std::size_t i = 0; i < retweets.size(); ++i)
    rt_at.emplace(retweets.week_labels[i], i);
  PairedSeries p;
  p.season = ili.season;
  for (std::size_t i = 0; i < ili.size(); ++i) {
    const auto it = rt_at.find(ili.week_labels[i]);
    if (it == rt_at.end()) continue;
    p.week_labels.push_back(ili.week_labels[i]);
    p.x.push_back(ili.values[i]);
    p.y.push_back(retweets.values[it->second]);
  }
  if (p.size() < 3) {
    throw Error(ErrorKind::InsufficientOverlap,
                "season " + ili.season + " shares " + std::to_string(p.size()) +
                    " weeks with the retweet series; need >= 3");
  }
  return p;
}

}  // namespace mediaflu
