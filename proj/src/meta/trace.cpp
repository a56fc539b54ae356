#include "ecpf/meta/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "ecpf/core/errors.hpp"

namespace ecpf::meta {

namespace {

constexpr std::string_view kHeader =
    "drift,instance,buffer,saved,reused,representations,deletions,fade,errors,similarity";

template <typename T>
T to_int(std::string_view s, std::size_t line) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError(line, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::pair<std::string_view, std::string_view> cut(std::string_view s, char sep, std::size_t line) {
  const std::size_t pos = s.find(sep);
  if (pos == std::string_view::npos) throw ParseError(line, "missing '" + std::string(1, sep) + "' in '" + std::string(s) + "'");
  return {s.substr(0, pos), s.substr(pos + 1)};
}

template <typename Range, typename F>
void join(std::ostream& out, const Range& items, F&& emit) {
  bool first = true;
  for (const auto& item : items) {
    if (!first) out << ';';
    first = false;
    emit(item);
  }
}

}  // namespace

void fill_state(DriftEvent& ev, const Collection& collection, const BufferEvaluation& evaluation) {
  ev.fade.clear();
  for (const auto& r : collection.records()) {
    ev.fade.push_back({r.id, r.fade_points, r.reuse_count, r.drifts_survived, r.inherited_points});
  }
  ev.errors.clear();
  for (std::size_t i = 0; i < evaluation.ids.size(); ++i) {
    ErrorRow row{evaluation.ids[i], std::string(evaluation.length, '0')};
    for (std::size_t j = 0; j < evaluation.length; ++j) {
      if (evaluation.error_at(i, j)) row.bits[j] = '1';
    }
    ev.errors.push_back(std::move(row));
  }
  ev.similarity.clear();
  for (const auto& [key, s] : collection.similarity().entries()) {
    ev.similarity.push_back({key.first, key.second, s.seen, s.agree});
  }
}

void write_trace_header(std::ostream& out) { out << kHeader << '\n'; }

void write_trace_row(std::ostream& out, const DriftEvent& ev) {
  out << ev.drift << ',' << ev.instance << ',' << ev.buffer_length << ',';
  if (ev.saved) out << *ev.saved;
  out << ',';
  if (ev.reused) out << *ev.reused;
  out << ',';
  join(out, ev.representations, [&](const Representation& r) { out << r.survivor << '<' << r.deleted << ':' << r.points; });
  out << ',';
  join(out, ev.deletions, [&](std::uint64_t id) { out << id; });
  out << ',';
  join(out, ev.fade, [&](const FadeRow& f) {
    out << f.id << ':' << f.points << ':' << f.reuse_count << ':' << f.drifts_survived << ':' << f.inherited;
  });
  out << ',';
  join(out, ev.errors, [&](const ErrorRow& e) { out << e.id << '=' << e.bits; });
  out << ',';
  join(out, ev.similarity, [&](const SimilarityRow& s) { out << s.a << '-' << s.b << ':' << s.seen << '/' << s.agree; });
  out << '\n';
}

std::vector<DriftEvent> read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kHeader) throw ParseError(1, "not a drift trace header");
  std::vector<DriftEvent> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw ParseError(line_no, "expected 10 fields, got " + std::to_string(f.size()));
    DriftEvent ev;
    ev.drift = to_int<std::uint64_t>(f[0], line_no);
    ev.instance = to_int<std::uint64_t>(f[1], line_no);
    ev.buffer_length = to_int<std::size_t>(f[2], line_no);
    if (!f[3].empty()) ev.saved = to_int<std::uint64_t>(f[3], line_no);
    if (!f[4].empty()) ev.reused = to_int<std::uint64_t>(f[4], line_no);
    for (const auto item : split(f[5], ';')) {
      const auto [s, rest] = cut(item, '<', line_no);
      const auto [d, p] = cut(rest, ':', line_no);
      ev.representations.push_back({to_int<std::uint64_t>(s, line_no), to_int<std::uint64_t>(d, line_no),
                                    to_int<std::int64_t>(p, line_no)});
    }
    for (const auto item : split(f[6], ';')) ev.deletions.push_back(to_int<std::uint64_t>(item, line_no));
    for (const auto item : split(f[7], ';')) {
      const auto parts = split(item, ':');
      if (parts.size() != 5) throw ParseError(line_no, "bad fade entry '" + std::string(item) + "'");
      ev.fade.push_back({to_int<std::uint64_t>(parts[0], line_no), to_int<std::int64_t>(parts[1], line_no),
                         to_int<std::uint64_t>(parts[2], line_no), to_int<std::uint64_t>(parts[3], line_no),
                         to_int<std::int64_t>(parts[4], line_no)});
    }
    for (const auto item : split(f[8], ';')) {
      const auto [id, bits] = cut(item, '=', line_no);
      if (bits.find_first_not_of("01") != std::string_view::npos) throw ParseError(line_no, "bad error bits");
      ev.errors.push_back({to_int<std::uint64_t>(id, line_no), std::string(bits)});
    }
    for (const auto item : split(f[9], ';')) {
      const auto [ids, counts] = cut(item, ':', line_no);
      const auto [a, b] = cut(ids, '-', line_no);
      const auto [seen, agree] = cut(counts, '/', line_no);
      ev.similarity.push_back({to_int<std::uint64_t>(a, line_no), to_int<std::uint64_t>(b, line_no),
                               to_int<std::uint64_t>(seen, line_no), to_int<std::uint64_t>(agree, line_no)});
    }
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<DriftEvent> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StreamError("cannot open " + path.string());
  return read_trace(in);
}

}  // namespace ecpf::meta
