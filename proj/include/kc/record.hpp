#pragma once

// Bibliographic records: parsing Scopus-style CSV exports, keyword and
// reference canonicalization, deduplication, title filtering and period slicing.

#include <algorithm>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kc/csv.hpp"
#include "kc/error.hpp"
#include "kc/text.hpp"

namespace kc {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

struct Affiliation {
  std::string institution;
  std::string country;

  bool operator==(const Affiliation&) const = default;
};

struct BibRecord {
  std::string id;
  std::string title;
  std::vector<std::string> authors;
  std::vector<Affiliation> affiliations;
  int year = 0;
  std::vector<std::string> keywords;    // canonical, unique, in order of first appearance
  std::vector<std::string> references;  // raw reference strings
  std::string source;
  std::optional<std::string> doi;

  bool operator==(const BibRecord&) const = default;
};

struct Provenance {
  std::string source;
  std::string format;
  std::size_t rows = 0;
  std::size_t records = 0;
  std::size_t errors = 0;

  bool operator==(const Provenance&) const = default;
};

struct Corpus {
  std::vector<BibRecord> records;  // sorted by id
  std::vector<Provenance> provenance;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  bool operator==(const Corpus&) const = default;
};

struct RowError {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  Corpus corpus;
  std::vector<RowError> errors;
};

enum class ExportFormat { scopus_csv };

inline ExportFormat parse_format(std::string_view tag) {
  if (tag == "scopus-csv") return ExportFormat::scopus_csv;
  throw ValidationError("unsupported export format '" + std::string(tag) + "' (expected scopus-csv)");
}

inline std::string to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::scopus_csv:
      return "scopus-csv";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Canonical forms

inline std::string normalize_keyword(std::string_view raw) { return text::lower(text::collapse_ws(raw)); }

inline std::string canonical_title(std::string_view title) { return normalize_keyword(title); }

inline std::string canonical_doi(std::string_view doi) {
  std::string d = text::lower(text::trim(doi));
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                  "http://dx.doi.org/", "doi:"}) {
    if (d.rfind(prefix, 0) == 0) {
      d.erase(0, prefix.size());
      break;
    }
  }
  return std::string(text::trim(d));
}

struct RefKey {
  std::string key;

  auto operator<=>(const RefKey&) const = default;
};

namespace detail {

// Lowercase, drop every byte that is neither a word byte nor whitespace, collapse spaces.
inline std::string strip_punctuation(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (text::is_word_byte(c))
      out.push_back(text::to_lower(c));
    else if (text::is_space(c))
      out.push_back(' ');
  }
  return text::collapse_ws(out);
}

inline bool is_alphabetic_token(std::string_view tok) {
  return !tok.empty() && std::none_of(tok.begin(), tok.end(), text::is_digit);
}

// Cut at `limit` bytes without splitting a UTF-8 sequence.
inline std::string utf8_prefix(std::string s, std::size_t limit) {
  if (s.size() <= limit) return s;
  std::size_t cut = limit;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  s.resize(cut);
  return s;
}

}  // namespace detail

inline constexpr std::size_t kRefSegmentLimit = 40;

// surname|year|leading words of the segment after the year.
inline RefKey reference_key(std::string_view raw_ref) {
  std::string_view s = text::trim(raw_ref);
  if (s.empty()) return {};

  std::size_t year_pos = std::string_view::npos;
  for (std::size_t i = 0; i < s.size();) {
    if (!text::is_digit(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && text::is_digit(s[j])) ++j;
    if (j - i == 4 && (s[i] == '1' || s[i] == '2')) {
      year_pos = i;
      break;
    }
    i = j;
  }
  if (year_pos == std::string_view::npos) return {detail::strip_punctuation(s)};

  std::string surname;
  {
    std::size_t i = 0;
    while (i < s.size() && !text::is_word_byte(s[i])) ++i;
    while (i < s.size() && text::is_word_byte(s[i])) surname.push_back(text::to_lower(s[i++]));
  }

  std::string_view rest = s.substr(year_pos + 4);
  std::size_t b = 0;
  while (b < rest.size() && !text::is_word_byte(rest[b])) ++b;
  rest = rest.substr(b);
  rest = rest.substr(0, rest.find('.'));

  std::string segment;
  for (auto& tok : text::split(detail::strip_punctuation(rest), " ")) {
    if (!detail::is_alphabetic_token(tok)) break;
    if (!segment.empty()) segment.push_back(' ');
    segment += tok;
  }
  segment = detail::utf8_prefix(std::move(segment), kRefSegmentLimit);
  segment = std::string(text::trim(segment));

  return {surname + "|" + std::string(s.substr(year_pos, 4)) + "|" + segment};
}

// "elshandidy t. 2015. corp gov: int rev"
inline std::string display_label(const BibRecord& r) {
  auto clean = [](std::string s) {
    s = text::lower(text::collapse_ws(s));
    s.erase(std::remove(s.begin(), s.end(), ','), s.end());
    while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
    return s;
  };
  std::string out;
  if (!r.authors.empty()) out = clean(r.authors.front()) + ". ";
  out += std::to_string(r.year);
  std::string src = clean(r.source);
  if (!src.empty()) out += ". " + src;
  return out;
}

inline void sort_by_id(std::vector<BibRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const BibRecord& a, const BibRecord& b) { return text::id_less(a.id, b.id); });
}

// ---------------------------------------------------------------------------
// Parsing

struct ParseOptions {
  std::string reference_delimiter = ";";
  std::string source_name = "<stream>";
  // Generated ids continue from here so that several files can share one id space.
  std::size_t id_offset = 0;
};

inline std::string generated_id(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "doc-%06zu", ordinal);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_authors(std::string_view cell) {
  if (cell.find(';') != std::string_view::npos) return text::split_nonempty(cell, ";");
  return text::split_nonempty(cell, ", ");
}

inline bool contains_ci(std::string_view hay, std::string_view needle) {
  return text::lower(hay).find(needle) != std::string::npos;
}

// "Dept of X, Beijing Normal University, Beijing, China" -> (Beijing Normal University, China)
inline Affiliation split_affiliation(std::string_view entry) {
  auto parts = text::split_nonempty(entry, ",");
  if (parts.empty()) return {};
  if (parts.size() == 1) return {parts.front(), ""};
  std::string institution = parts.front();
  // Sub-unit prefixes are skipped when no stronger marker is found.
  auto subunit = [](const std::string& p) {
    auto l = text::lower(p);
    for (std::string_view pre : {"dep", "dept", "faculty", "division", "school of"})
      if (l.starts_with(pre)) return true;
    return false;
  };
  auto named = std::find_if_not(parts.begin(), parts.end() - 1, subunit);
  if (named != parts.end() - 1) institution = *named;
  for (std::string_view marker : {"univ", "institut"}) {
    auto hit = std::find_if(parts.begin(), parts.end() - 1,
                            [&](const std::string& p) { return contains_ci(p, marker); });
    if (hit != parts.end() - 1) {
      institution = *hit;
      break;
    }
  }
  return {institution, parts.back()};
}

inline std::vector<std::string> split_keywords(std::string_view cell) {
  std::vector<std::string> out;
  for (auto& raw : text::split(cell, ";")) {
    auto k = normalize_keyword(raw);
    if (!k.empty() && std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
  }
  return out;
}

inline std::optional<int> parse_year(std::string_view cell) {
  auto t = text::trim(cell);
  if (!text::all_digits(t) || t.size() > 4) return std::nullopt;
  int y = std::stoi(std::string(t));
  if (y < kMinYear || y > kMaxYear) return std::nullopt;
  return y;
}

}  // namespace detail

inline ParseResult parse_export(std::string_view content, ExportFormat format, const ParseOptions& opts = {}) {
  ParseResult result;
  auto rows = csv::parse(content);
  if (rows.empty()) throw ParseError(opts.source_name + ": empty export, missing header row");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i)
    column.emplace(text::lower(text::trim(rows[0].fields[i])), i);
  for (const char* required : {"Title", "Year"})
    if (!column.count(text::lower(required)))
      throw ParseError(opts.source_name + ": missing required column '" + required + "'");

  auto col = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = column.find(text::lower(name));
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto c_title = *col("Title");
  const auto c_year = *col("Year");
  const auto c_authors = col("Authors");
  const auto c_keywords = col("Author Keywords");
  const auto c_affil = col("Affiliations");
  const auto c_refs = col("References");
  const auto c_source = col("Source title");
  const auto c_doi = col("DOI");
  const auto c_eid = col("EID");
  const std::size_t width = rows[0].fields.size();

  std::set<std::string> seen_ids;
  std::size_t ordinal = opts.id_offset;
  auto fail = [&](const csv::Row& row, std::string msg) {
    result.errors.push_back({opts.source_name, row.line, std::move(msg)});
  };

  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& row = rows[r];
    ++ordinal;
    if (row.fields.size() > width) {
      fail(row, "expected " + std::to_string(width) + " fields, found " + std::to_string(row.fields.size()));
      continue;
    }
    row.fields.resize(width);
    auto cell = [&](std::optional<std::size_t> c) -> std::string_view {
      return c ? std::string_view(row.fields[*c]) : std::string_view{};
    };

    auto year = detail::parse_year(row.fields[c_year]);
    if (!year) {
      fail(row, "malformed year '" + row.fields[c_year] + "'");
      continue;
    }
    BibRecord rec;
    rec.title = text::collapse_ws(row.fields[c_title]);
    if (rec.title.empty()) {
      fail(row, "empty title");
      continue;
    }
    rec.year = *year;
    rec.id = std::string(text::trim(cell(c_eid)));
    if (rec.id.empty()) rec.id = generated_id(ordinal);
    if (!seen_ids.insert(rec.id).second) {
      fail(row, "duplicate id '" + rec.id + "'");
      continue;
    }
    rec.authors = detail::split_authors(cell(c_authors));
    for (auto& entry : text::split_nonempty(cell(c_affil), ";")) {
      auto a = detail::split_affiliation(entry);
      if (!a.institution.empty()) rec.affiliations.push_back(std::move(a));
    }
    rec.keywords = detail::split_keywords(cell(c_keywords));
    rec.references = text::split_nonempty(cell(c_refs), opts.reference_delimiter);
    rec.source = text::collapse_ws(cell(c_source));
    auto doi = text::trim(cell(c_doi));
    if (!doi.empty()) rec.doi = std::string(doi);
    result.corpus.records.push_back(std::move(rec));
  }

  sort_by_id(result.corpus.records);
  result.corpus.provenance.push_back(
      {opts.source_name, to_string(format), rows.size() - 1, result.corpus.size(), result.errors.size()});
  return result;
}

inline ParseResult parse_export(std::istream& in, ExportFormat format, const ParseOptions& opts = {}) {
  std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_export(content, format, opts);
}

// Concatenates corpora; a later record whose id is already present is dropped.
inline Corpus merge(std::vector<Corpus> parts) {
  Corpus out;
  std::set<std::string> ids;
  for (auto& part : parts) {
    for (auto& rec : part.records)
      if (ids.insert(rec.id).second) out.records.push_back(std::move(rec));
    for (auto& p : part.provenance) out.provenance.push_back(std::move(p));
  }
  sort_by_id(out.records);
  return out;
}

// Scopus-style CSV with an EID column carrying the record id.
inline std::string write_scopus_csv(const Corpus& corpus, const std::string& reference_delimiter = ";") {
  std::string out = csv::line(
      {"Authors", "Title", "Year", "Author Keywords", "Affiliations", "References", "Source title", "DOI", "EID"});
  for (const auto& r : corpus.records) {
    std::vector<std::string> affil;
    for (const auto& a : r.affiliations) affil.push_back(a.country.empty() ? a.institution : a.institution + ", " + a.country);
    out += csv::line({text::join(r.authors, "; "), r.title, std::to_string(r.year), text::join(r.keywords, "; "),
                      text::join(affil, "; "), text::join(r.references, reference_delimiter + " "), r.source,
                      r.doi.value_or(""), r.id});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deduplication and filtering

// First occurrence wins; DOI equality first, then (canonical title, year).
inline Corpus dedup(const Corpus& corpus) {
  Corpus out;
  out.provenance = corpus.provenance;
  std::set<std::string> dois;
  std::set<std::pair<std::string, int>> titles;
  for (const auto& rec : corpus.records) {
    if (rec.doi) {
      auto d = canonical_doi(*rec.doi);
      if (!d.empty() && dois.count(d)) continue;
    }
    auto key = std::make_pair(canonical_title(rec.title), rec.year);
    if (titles.count(key)) continue;
    if (rec.doi) {
      auto d = canonical_doi(*rec.doi);
      if (!d.empty()) dois.insert(d);
    }
    titles.insert(std::move(key));
    out.records.push_back(rec);
  }
  return out;
}

struct TitleQuery {
  std::vector<std::string> required_terms;
  std::vector<std::string> any_of_terms;
  // Lets a title word carry an extra "s" or "es" suffix ("risk" matches "risks").
  bool stemming = false;

  void validate() const {
    if (required_terms.empty()) throw ValidationError("title query needs at least one required term");
    for (const auto* list : {&required_terms, &any_of_terms})
      for (const auto& t : *list)
        if (text::words(t).empty()) throw ValidationError("title query term '" + t + "' has no words");
  }

  bool matches(std::string_view title) const {
    auto tokens = text::words(title);
    auto has = [&](const std::string& term) { return contains_term(tokens, text::words(term)); };
    return std::all_of(required_terms.begin(), required_terms.end(), has) &&
           std::any_of(any_of_terms.begin(), any_of_terms.end(), has);
  }

 private:
  bool word_matches(const std::string& word, const std::string& term) const {
    if (word == term) return true;
    if (!stemming) return false;
    return word == term + "s" || word == term + "es";
  }

  bool contains_term(const std::vector<std::string>& tokens, const std::vector<std::string>& term) const {
    if (term.empty() || term.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + term.size() <= tokens.size(); ++i) {
      bool ok = true;
      for (std::size_t j = 0; ok && j < term.size(); ++j) ok = word_matches(tokens[i + j], term[j]);
      if (ok) return true;
    }
    return false;
  }
};

inline Corpus filter_by_title(const Corpus& corpus, const TitleQuery& q) {
  q.validate();
  Corpus out;
  out.provenance = corpus.provenance;
  std::copy_if(corpus.records.begin(), corpus.records.end(), std::back_inserter(out.records),
               [&](const BibRecord& r) { return q.matches(canonical_title(r.title)); });
  return out;
}

// ---------------------------------------------------------------------------
// Periods

struct Period {
  int start = 0;
  int end = 0;  // inclusive

  bool contains(int year) const { return year >= start && year <= end; }
  std::string label() const { return std::to_string(start) + "-" + std::to_string(end); }
  auto operator<=>(const Period&) const = default;
};

struct PeriodSlicing {
  std::vector<Period> periods;

  void validate() const {
    for (std::size_t i = 0; i < periods.size(); ++i) {
      if (periods[i].start > periods[i].end)
        throw ValidationError("period " + periods[i].label() + " starts after it ends");
      if (i && periods[i].start <= periods[i - 1].end)
        throw ValidationError("periods " + periods[i - 1].label() + " and " + periods[i].label() +
                              " overlap or are out of order");
    }
  }
};

struct SliceResult {
  std::vector<std::pair<Period, Corpus>> slices;
  Corpus unassigned;
};

inline SliceResult slice_periods(const Corpus& corpus, const PeriodSlicing& s) {
  s.validate();
  SliceResult out;
  for (const auto& p : s.periods) out.slices.push_back({p, Corpus{{}, corpus.provenance}});
  out.unassigned.provenance = corpus.provenance;
  for (const auto& rec : corpus.records) {
    auto it = std::find_if(out.slices.begin(), out.slices.end(),
                           [&](const auto& sl) { return sl.first.contains(rec.year); });
    (it == out.slices.end() ? out.unassigned : it->second).records.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON form

inline nlohmann::json to_json(const BibRecord& r) {
  nlohmann::json affil = nlohmann::json::array();
  for (const auto& a : r.affiliations) affil.push_back({{"country", a.country}, {"institution", a.institution}});
  return {{"id", r.id},
          {"title", r.title},
          {"authors", r.authors},
          {"affiliations", affil},
          {"year", r.year},
          {"keywords", r.keywords},
          {"references", r.references},
          {"source", r.source},
          {"doi", r.doi ? nlohmann::json(*r.doi) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const Corpus& c) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : c.records) records.push_back(to_json(r));
  nlohmann::json prov = nlohmann::json::array();
  for (const auto& p : c.provenance)
    prov.push_back({{"source", p.source},
                    {"format", p.format},
                    {"rows", p.rows},
                    {"records", p.records},
                    {"errors", p.errors}});
  return {{"records", records}, {"provenance", prov}};
}

inline BibRecord record_from_json(const nlohmann::json& j) {
  BibRecord r;
  r.id = j.at("id").get<std::string>();
  r.title = j.at("title").get<std::string>();
  r.authors = j.at("authors").get<std::vector<std::string>>();
  for (const auto& a : j.at("affiliations"))
    r.affiliations.push_back({a.at("institution").get<std::string>(), a.at("country").get<std::string>()});
  r.year = j.at("year").get<int>();
  r.keywords = j.at("keywords").get<std::vector<std::string>>();
  r.references = j.at("references").get<std::vector<std::string>>();
  r.source = j.at("source").get<std::string>();
  if (!j.at("doi").is_null()) r.doi = j.at("doi").get<std::string>();
  return r;
}

inline Corpus corpus_from_json(const nlohmann::json& j) {
  Corpus c;
  try {
    for (const auto& r : j.at("records")) c.records.push_back(record_from_json(r));
    for (const auto& p : j.at("provenance"))
      c.provenance.push_back({p.at("source").get<std::string>(), p.at("format").get<std::string>(),
                              p.at("rows").get<std::size_t>(), p.at("records").get<std::size_t>(),
                              p.at("errors").get<std::size_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed corpus JSON: ") + e.what());
  }
  sort_by_id(c.records);
  return c;
}

}  // namespace kc
