#include "metaex/corpus/records.h"

#include <array>
#include <fstream>
#include <string_view>

#include "json.hpp"
#include "metaex/errors.h"
#include "metaex/random.h"

namespace metaex::corpus {

using nlohmann::json;

namespace {

std::string* StringField(MetadataRecord& r, std::string_view name) {
  if (name == "title") return &r.title;
  if (name == "abstract") return &r.abstract;
  if (name == "date") return &r.date;
  if (name == "journal") return &r.journal;
  if (name == "doi") return &r.doi;
  return nullptr;
}

std::vector<std::string>* ListField(MetadataRecord& r, std::string_view name) {
  if (name == "authors") return &r.authors;
  if (name == "emails") return &r.emails;
  if (name == "addresses") return &r.addresses;
  if (name == "affiliations") return &r.affiliations;
  return nullptr;
}

}  // namespace

std::string RecordToJson(const MetadataRecord& record,
                         const std::optional<std::string>& doc_id) {
  // ordered_json keeps the field order stable in the output.
  nlohmann::ordered_json j;
  if (doc_id) j["doc_id"] = *doc_id;
  j["title"] = record.title;
  j["abstract"] = record.abstract;
  j["authors"] = record.authors;
  j["emails"] = record.emails;
  j["addresses"] = record.addresses;
  j["date"] = record.date;
  j["journal"] = record.journal;
  j["affiliations"] = record.affiliations;
  j["doi"] = record.doi;
  return j.dump();
}

RecordLine RecordFromJson(const std::string& line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  RecordLine out;
  for (const auto& [key, value] : j.items()) {
    if (key == "doc_id") {
      out.doc_id = value.get<std::string>();
    } else if (std::string* s = StringField(out.record, key)) {
      *s = value.get<std::string>();
    } else if (auto* list = ListField(out.record, key)) {
      if (!value.is_array()) {
        throw ValidationError("field '" + key + "' must be an array");
      }
      *list = value.get<std::vector<std::string>>();
    } else {
      throw ValidationError("unknown record field '" + key + "'");
    }
  }
  return out;
}

std::vector<RecordLine> ReadRecordLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read record file " + path.string());
  std::vector<RecordLine> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(RecordFromJson(line));
    } catch (const std::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
  return out;
}

std::vector<MetadataRecord> ReadRecords(const std::filesystem::path& path) {
  std::vector<MetadataRecord> out;
  int line_no = 0;
  for (RecordLine& l : ReadRecordLines(path)) {
    ++line_no;
    if (l.record.empty()) {
      throw ValidationError(path.string() + ": record " +
                            std::to_string(line_no) + " has no fields");
    }
    out.push_back(std::move(l.record));
  }
  return out;
}

void WriteRecordLines(const std::filesystem::path& path,
                      const std::vector<RecordLine>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const RecordLine& l : lines) {
    out << RecordToJson(l.record, l.doc_id) << '\n';
  }
}

void WriteRecords(const std::filesystem::path& path,
                  const std::vector<MetadataRecord>& records) {
  std::vector<RecordLine> lines;
  lines.reserve(records.size());
  for (const MetadataRecord& r : records) lines.push_back({std::nullopt, r});
  WriteRecordLines(path, lines);
}

// ---------------------------------------------------------------------------
// Synthetic records.

namespace {

constexpr std::array<std::string_view, 40> kFirstNames = {
    "Anna",    "Jan",     "Lena",   "Thomas",  "Katharina", "Michael",
    "Sabine",  "Stefan",  "Julia",  "Andreas", "Claudia",   "Markus",
    "Miriam",  "Tobias",  "Ute",    "Jürgen",  "Sophie",    "Felix",
    "Birgit",  "Lukas",   "Petra",  "Matthias", "Nina",     "Florian",
    "Hannah",  "Dirk",    "Carola", "Sebastian", "Ines",    "Ralf",
    "Franziska", "Heiko", "Jana",   "Oliver",  "Kerstin",   "Christoph",
    "Maren",   "Wolfgang", "Svenja", "Bernd"};

constexpr std::array<std::string_view, 48> kLastNames = {
    "Müller",    "Schmidt",  "Schneider", "Fischer",   "Weber",
    "Meyer",     "Wagner",   "Becker",    "Schulz",    "Hoffmann",
    "Koch",      "Richter",  "Klein",     "Wolf",      "Schröder",
    "Neumann",   "Schwarz",  "Braun",     "Zimmermann", "Krüger",
    "Hartmann",  "Lange",    "Werner",    "Krause",    "Lehmann",
    "Köhler",    "Herrmann", "König",     "Walter",    "Mayer",
    "Huber",     "Kaiser",   "Fuchs",     "Peters",    "Lang",
    "Scholz",    "Möller",   "Weiß",      "Jung",      "Hahn",
    "Vogel",     "Roth",     "Beck",      "Lorenz",    "Baumann",
    "Franke",    "Albrecht", "Busch"};

constexpr std::array<std::string_view, 24> kDisciplines = {
    "Soziologie",          "Politikwissenschaft", "Medienwissenschaft",
    "Psychologie",         "Erziehungswissenschaft", "Informatik",
    "Kommunikationswissenschaft", "Geschichte", "Ökonomie",
    "Sozialforschung",     "Kulturwissenschaft",  "Demographie",
    "Kriminologie",        "Stadtforschung",      "Wirtschaftsinformatik",
    "Arbeitsmarktforschung", "Bildungsforschung", "Migrationsforschung",
    "Gesundheitswissenschaften", "Sprachwissenschaft", "Philosophie",
    "Sozialpolitik",       "Methodenlehre",       "Umweltsoziologie"};

struct Place {
  std::string_view city;
  std::string_view postcode;
  std::string_view university;
  std::string_view domain;
};

constexpr std::array<Place, 16> kPlaces = {{
    {"Koblenz", "56070", "Universität Koblenz-Landau", "uni-koblenz.de"},
    {"Mannheim", "68159", "Universität Mannheim", "uni-mannheim.de"},
    {"Köln", "50667", "Universität zu Köln", "uni-koeln.de"},
    {"Berlin", "10117", "Humboldt-Universität zu Berlin", "hu-berlin.de"},
    {"München", "80539", "Ludwig-Maximilians-Universität München",
     "lmu.de"},
    {"Hamburg", "20146", "Universität Hamburg", "uni-hamburg.de"},
    {"Bielefeld", "33615", "Universität Bielefeld", "uni-bielefeld.de"},
    {"Leipzig", "04109", "Universität Leipzig", "uni-leipzig.de"},
    {"Frankfurt", "60323", "Goethe-Universität Frankfurt",
     "uni-frankfurt.de"},
    {"Göttingen", "37073", "Georg-August-Universität Göttingen",
     "uni-goettingen.de"},
    {"Bremen", "28359", "Universität Bremen", "uni-bremen.de"},
    {"Konstanz", "78464", "Universität Konstanz", "uni-konstanz.de"},
    {"Tübingen", "72074", "Eberhard Karls Universität Tübingen",
     "uni-tuebingen.de"},
    {"Dresden", "01069", "Technische Universität Dresden", "tu-dresden.de"},
    {"Bochum", "44801", "Ruhr-Universität Bochum", "rub.de"},
    {"Siegen", "57068", "Universität Siegen", "uni-siegen.de"},
}};

constexpr std::array<std::string_view, 14> kStreets = {
    "Universitätsstraße", "Schlossplatz",    "Bahnhofstraße",
    "Am Hofgarten",       "Albertus-Magnus-Platz", "Unter den Linden",
    "Rheinau",            "Hauptstraße",     "Lindenallee",
    "Marktplatz",         "Gartenweg",       "Beethovenstraße",
    "Parkstraße",         "Ringstraße"};

constexpr std::array<std::string_view, 14> kJournalNames = {
    "Zeitschrift für Soziologie",
    "Kölner Zeitschrift für Soziologie und Sozialpsychologie",
    "Berliner Journal für Soziologie",
    "Soziale Welt",
    "Politische Vierteljahresschrift",
    "Zeitschrift für Medienwissenschaft",
    "Publizistik",
    "Zeitschrift für Erziehungswissenschaft",
    "Medien und Kommunikationswissenschaft",
    "Österreichische Zeitschrift für Soziologie",
    "Zeitschrift für Politikwissenschaft",
    "Sozialer Fortschritt",
    "Historische Sozialforschung",
    "Leviathan"};

constexpr std::array<std::string_view, 16> kJournalAbbrev = {
    "zfs",  "kzfss", "bjs", "sw",   "pvs", "zfm", "pub", "zfe",
    "mk",   "ozs",   "zpol", "sf",  "hsr", "lev", "jsr", "mrep"};

constexpr std::array<std::string_view, 12> kMonths = {
    "Januar", "Februar", "März",     "April",   "Mai",      "Juni",
    "Juli",   "August",  "September", "Oktober", "November", "Dezember"};

// Title vocabulary: nouns and noun phrases typical for social science
// publications.
constexpr std::array<std::string_view, 48> kTitleNouns = {
    "Ungleichheit",   "Digitalisierung", "Migration",     "Arbeitsmarkt",
    "Bildungserfolg", "Partizipation",   "Medienwandel",  "Familie",
    "Lebensverlauf",  "Wohlfahrtsstaat", "Öffentlichkeit", "Integration",
    "Mobilität",      "Vertrauen",       "Netzwerke",     "Identität",
    "Gesundheit",     "Armut",           "Erwerbstätigkeit", "Generationen",
    "Nachbarschaft",  "Wahlverhalten",   "Sozialkapital", "Engagement",
    "Geschlechterrollen", "Jugendkultur", "Religion",     "Stadtentwicklung",
    "Pflege",         "Einkommen",       "Diskriminierung", "Bürgerschaft",
    "Erinnerungskultur", "Plattformen",  "Algorithmen",   "Klimapolitik",
    "Kommunen",       "Medienkompetenz", "Alltag",        "Zivilgesellschaft",
    "Demokratie",     "Sicherheit",      "Bildungspolitik", "Wissenschaft",
    "Zeitverwendung", "Wohnen",          "Konsum",        "Freizeit"};

constexpr std::array<std::string_view, 14> kTitleAdjectives = {
    "soziale",      "digitale",     "politische",  "regionale",
    "europäische",  "empirische",   "neue",        "informelle",
    "kulturelle",   "ökonomische",  "ländliche",   "städtische",
    "institutionelle", "subjektive"};

constexpr std::array<std::string_view, 12> kTitleConnectives = {
    "und",  "im",    "in",    "zwischen", "als",  "für",
    "der",  "unter", "durch", "nach",     "zur",  "von"};

constexpr std::array<std::string_view, 10> kTitleLead = {
    "Eine empirische Analyse",  "Befunde aus Deutschland",
    "Ein Vergleich",            "Eine Längsschnittstudie",
    "Theoretische Überlegungen", "Ergebnisse einer Befragung",
    "Eine Fallstudie",          "Perspektiven der Forschung",
    "Eine Bestandsaufnahme",    "Neue Daten"};

// Abstract vocabulary. Shares function words with the filler text but has
// its own research-oriented content words.
constexpr std::array<std::string_view, 64> kAbstractWords = {
    "Der",          "Beitrag",      "untersucht",   "die",
    "Frage",        "ob",           "sich",         "im",
    "Zeitverlauf",  "verändert",    "hat",          "Auf",
    "Grundlage",    "von",          "Daten",        "des",
    "Sozio-oekonomischen", "Panels", "zeigen",      "wir",
    "dass",         "Unterschiede", "zwischen",     "Gruppen",
    "bestehen",     "bleiben",      "Die",          "Ergebnisse",
    "deuten",       "darauf",       "hin",          "Effekte",
    "stärker",      "ausfallen",    "als",          "erwartet",
    "Zudem",        "diskutieren",  "Implikationen", "für",
    "Forschung",    "und",          "Praxis",       "Analyse",
    "Befragung",    "Stichprobe",   "Modelle",      "Hypothesen",
    "theoretisch",  "empirisch",    "signifikant",  "Einfluss",
    "Faktoren",     "Perspektive",  "Mechanismen",  "Befunde",
    "Studie",       "Vergleich",    "Kontext",      "Auswirkungen",
    "bestätigen",   "widersprechen", "Annahmen",    "Regressionen"};

std::string_view Pick(Rng& rng, const auto& words) {
  return words[static_cast<std::size_t>(rng.Below(words.size()))];
}

std::string Transliterate(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c == 0xC3 && i + 1 < s.size()) {
      const unsigned char d = static_cast<unsigned char>(s[i + 1]);
      ++i;
      switch (d) {
        case 0xA4: out += "ae"; break;  // ä
        case 0xB6: out += "oe"; break;  // ö
        case 0xBC: out += "ue"; break;  // ü
        case 0x9F: out += "ss"; break;  // ß
        case 0x84: out += "Ae"; break;  // Ä
        case 0x96: out += "Oe"; break;  // Ö
        case 0x9C: out += "Ue"; break;  // Ü
        default: break;
      }
      continue;
    }
    out += static_cast<char>(c);
  }
  return out;
}

std::string Lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

// Uppercases the first letter, including a leading lowercase umlaut.
std::string Capitalize(std::string s) {
  if (s.empty()) return s;
  const auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'a' && c <= 'z') {
    s[0] = static_cast<char>(c - 'a' + 'A');
  } else if (c == 0xC3 && s.size() > 1) {
    const auto d = static_cast<unsigned char>(s[1]);
    if (d == 0xA4 || d == 0xB6 || d == 0xBC) s[1] = static_cast<char>(d - 0x20);
  }
  return s;
}

std::string MakeTitle(Rng& rng) {
  std::string title;
  switch (rng.Below(3)) {
    case 0:
      title = std::string(Pick(rng, kTitleNouns)) + " " +
              std::string(Pick(rng, kTitleConnectives)) + " " +
              std::string(Pick(rng, kTitleNouns));
      break;
    case 1: {
      const std::string adj = Capitalize(std::string(Pick(rng, kTitleAdjectives)));
      title = adj + " " + std::string(Pick(rng, kTitleNouns)) + " " +
              std::string(Pick(rng, kTitleConnectives)) + " " +
              std::string(Pick(rng, kTitleAdjectives)) + "n " +
              std::string(Pick(rng, kTitleNouns));
      break;
    }
    default:
      title = std::string(Pick(rng, kTitleNouns)) + " und " +
              std::string(Pick(rng, kTitleNouns));
      break;
  }
  if (rng.Bernoulli(0.6)) title += ": " + std::string(Pick(rng, kTitleLead));
  return title;
}

std::string MakeAbstract(Rng& rng) {
  const int words = 20 + static_cast<int>(rng.Below(31));
  std::string text;
  int in_sentence = 0;
  int sentence_len = 6 + static_cast<int>(rng.Below(9));
  for (int i = 0; i < words; ++i) {
    std::string w(Pick(rng, kAbstractWords));
    if (in_sentence == 0 && w[0] >= 'a' && w[0] <= 'z') {
      w[0] = static_cast<char>(w[0] - 'a' + 'A');
    }
    ++in_sentence;
    const bool last = i + 1 == words;
    if (in_sentence == sentence_len || last) {
      w += '.';
      in_sentence = 0;
      sentence_len = 6 + static_cast<int>(rng.Below(9));
    } else if (rng.Bernoulli(0.06)) {
      w += ',';
    }
    if (!text.empty()) text += ' ';
    text += w;
  }
  return text;
}

std::string MakeDate(Rng& rng) {
  const int year = 1995 + static_cast<int>(rng.Below(29));
  const int month = 1 + static_cast<int>(rng.Below(12));
  const int day = 1 + static_cast<int>(rng.Below(28));
  char buf[64];
  switch (rng.Below(4)) {
    case 0:
      std::snprintf(buf, sizeof(buf), "%02d.%02d.%d", day, month, year);
      return buf;
    case 1:
      return std::string(kMonths[static_cast<std::size_t>(month - 1)]) + " " +
             std::to_string(year);
    case 2:
      return std::to_string(day) + ". " +
             std::string(kMonths[static_cast<std::size_t>(month - 1)]) + " " +
             std::to_string(year);
    default:
      std::snprintf(buf, sizeof(buf), "%d-%02d-%02d", year, month, day);
      return buf;
  }
}

}  // namespace

MetadataRecord SynthesizeRecord(std::uint64_t seed) {
  Rng rng(seed);
  MetadataRecord r;
  r.title = MakeTitle(rng);
  r.abstract = MakeAbstract(rng);

  const int n_authors = 1 + static_cast<int>(rng.Below(3));
  const Place& home = kPlaces[static_cast<std::size_t>(rng.Below(kPlaces.size()))];
  for (int a = 0; a < n_authors; ++a) {
    const std::string first(Pick(rng, kFirstNames));
    const std::string last(Pick(rng, kLastNames));
    r.authors.push_back(first + " " + last);
    if (a < 2) {
      r.emails.push_back(Lower(Transliterate(first)) + "." +
                         Lower(Transliterate(last)) + "@" +
                         std::string(home.domain));
    }
  }

  r.affiliations.push_back("Institut für " +
                           std::string(Pick(rng, kDisciplines)) + ", " +
                           std::string(home.university));
  if (n_authors > 1 && rng.Bernoulli(0.4)) {
    const Place& other =
        kPlaces[static_cast<std::size_t>(rng.Below(kPlaces.size()))];
    r.affiliations.push_back("Lehrstuhl für " +
                             std::string(Pick(rng, kDisciplines)) + ", " +
                             std::string(other.university));
  }

  const int number = 1 + static_cast<int>(rng.Below(120));
  if (rng.Bernoulli(0.25)) {
    r.addresses.push_back("Postfach " + std::to_string(10000 + rng.Below(90000)) +
                          ", " + std::string(home.postcode) + " " +
                          std::string(home.city));
  } else {
    r.addresses.push_back(std::string(Pick(rng, kStreets)) + " " +
                          std::to_string(number) + ", " +
                          std::string(home.postcode) + " " +
                          std::string(home.city));
  }

  r.date = MakeDate(rng);

  const std::size_t journal = static_cast<std::size_t>(rng.Below(kJournalNames.size()));
  const int volume = 10 + static_cast<int>(rng.Below(60));
  const int issue = 1 + static_cast<int>(rng.Below(4));
  switch (rng.Below(3)) {
    case 0:
      r.journal = std::string(kJournalNames[journal]) + " " +
                  std::to_string(volume) + "(" + std::to_string(issue) + ")";
      break;
    case 1:
      r.journal = std::string(kJournalNames[journal]) + ", Jg. " +
                  std::to_string(volume) + ", Heft " + std::to_string(issue);
      break;
    default:
      r.journal = std::string(kJournalNames[journal]);
      break;
  }

  const int year = 1995 + static_cast<int>(rng.Below(29));
  r.doi = "10." + std::to_string(1000 + rng.Below(9000)) + "/" +
          std::string(kJournalAbbrev[journal]) + "." + std::to_string(year) +
          "." + std::to_string(rng.Below(1000));
  return r;
}

std::vector<MetadataRecord> SynthesizeRecords(std::size_t count,
                                              std::uint64_t seed) {
  std::vector<MetadataRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(SynthesizeRecord(DeriveSeed(seed, i)));
  }
  return out;
}

}  // namespace metaex::corpus
