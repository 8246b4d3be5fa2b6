#include "dramatis/tei.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <map>
#include <optional>

#include "dramatis/text.hpp"
#include "dramatis/xml.hpp"

namespace dramatis {

namespace {

// Non-speech content inside <sp>.
constexpr std::array<std::string_view, 3> kExcludedInSpeech = {"speaker", "stage", "note"};

std::string collapse_whitespace(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending = false;
  for (char c : raw) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

void walk(const XmlNode& node, std::string_view local,
          const std::function<void(const XmlNode&)>& visit) {
  for (const auto& child : node.children) {
    if (child.kind != XmlNode::Kind::element) continue;
    if (xml_local_name(child.name) == local) visit(child);
    walk(child, local, visit);
  }
}

const XmlNode* descend(const XmlNode& root, std::initializer_list<std::string_view> path) {
  const XmlNode* node = &root;
  for (auto name : path) {
    node = node->child(name);
    if (!node) return nullptr;
  }
  return node;
}

std::optional<int> parse_year(std::string_view value) {
  // Accept "1602", "1602-05-01", and negative years.
  bool negative = false;
  size_t i = 0;
  if (i < value.size() && value[i] == '-') {
    negative = true;
    ++i;
  }
  size_t end = i;
  while (end < value.size() && value[end] >= '0' && value[end] <= '9') ++end;
  if (end == i) return std::nullopt;
  int year = 0;
  std::from_chars(value.data() + i, value.data() + end, year);
  return negative ? -year : year;
}

// DraCor-style normalization: premiere year if present, else the earlier of
// written/print, else whichever exists.
std::optional<int> normalized_year(const std::map<std::string, int>& years) {
  if (auto it = years.find("premiere"); it != years.end()) return it->second;
  const auto written = years.find("written");
  const auto print = years.find("print");
  if (written != years.end() && print != years.end())
    return std::min(written->second, print->second);
  if (written != years.end()) return written->second;
  if (print != years.end()) return print->second;
  return std::nullopt;
}

}  // namespace

PlayDocument parse_tei(std::string_view xml_text, std::string_view fallback_play_id,
                       IngestionReport* report, std::string_view corpus_id) {
  const XmlNode root = xml_parse(xml_text);
  PlayDocument play;
  play.corpus_id = std::string(corpus_id);
  play.play_id = std::string(fallback_play_id);

  const XmlNode* header = root.child("teiHeader");

  if (header) {
    if (const XmlNode* title_stmt = descend(*header, {"fileDesc", "titleStmt"})) {
      if (const XmlNode* title = title_stmt->child("title"))
        play.title = collapse_whitespace(title->collect_text());
      std::string authors;
      for (const auto& child : title_stmt->children) {
        if (child.kind != XmlNode::Kind::element || xml_local_name(child.name) != "author")
          continue;
        const std::string name = collapse_whitespace(child.collect_text());
        if (name.empty()) continue;
        if (!authors.empty()) authors += "; ";
        authors += name;
      }
      play.author = authors;
    }
    // DraCor id, when present, wins over the filename-derived fallback.
    walk(*header, "idno", [&](const XmlNode& idno) {
      const std::string* type = idno.attr("type");
      if (type && *type == "dracor") {
        const std::string id = collapse_whitespace(idno.collect_text());
        if (!id.empty()) play.play_id = id;
      }
    });
  }

  std::map<std::string, int> years;
  auto record_date = [&](const XmlNode& node) {
    const std::string* type = node.attr("type");
    if (!type) return;
    const std::string* when = node.attr("when");
    std::optional<int> year = when ? parse_year(*when) : std::nullopt;
    if (!year && node.attr("notBefore")) year = parse_year(*node.attr("notBefore"));
    if (year && !years.contains(*type)) years.emplace(*type, *year);
  };
  if (const XmlNode* stand_off = root.child("standOff"))
    walk(*stand_off, "event", record_date);
  if (header) walk(*header, "date", record_date);
  play.year_composed = normalized_year(years);

  // Cast list: person and personGrp entries under particDesc.
  std::map<std::string, size_t> index_by_id;
  auto add_character = [&](const std::string& id, Gender gender, bool is_group) {
    if (index_by_id.contains(id)) return;
    CharacterSpeech speech;
    speech.character_id = id;
    speech.gender = gender;
    speech.is_group = is_group;
    index_by_id.emplace(id, play.characters.size());
    play.characters.push_back(std::move(speech));
  };
  if (header) {
    auto add_from_node = [&](const XmlNode& person, bool is_group) {
      const std::string* id = person.attr("xml:id");
      if (!id || id->empty()) return;
      const std::string* sex = person.attr("sex");
      add_character(*id, sex ? gender_from_string(*sex) : Gender::unknown, is_group);
    };
    if (const XmlNode* partic = descend(*header, {"profileDesc", "particDesc"})) {
      walk(*partic, "person", [&](const XmlNode& n) { add_from_node(n, false); });
      walk(*partic, "personGrp", [&](const XmlNode& n) { add_from_node(n, true); });
    }
  }

  // Speech: one utterance per <sp>, attributed to every referenced speaker.
  const XmlNode* text_node = root.child("text");
  if (text_node) {
    walk(*text_node, "sp", [&](const XmlNode& sp) {
      const std::string* who = sp.attr("who");
      if (!who || who->empty()) {
        if (report)
          report->warn(play.corpus_id, play.play_id, "sp element without a who attribute");
        return;
      }
      const std::string utterance =
          collapse_whitespace(sp.collect_text(std::span<const std::string_view>(
              kExcludedInSpeech.data(), kExcludedInSpeech.size())));
      // who may hold several space-separated #id references.
      size_t start = 0;
      while (start < who->size()) {
        size_t end = who->find(' ', start);
        if (end == std::string::npos) end = who->size();
        std::string ref = who->substr(start, end - start);
        start = end + 1;
        if (ref.empty()) continue;
        if (ref.front() == '#') ref.erase(0, 1);
        if (ref.empty()) continue;
        auto it = index_by_id.find(ref);
        if (it == index_by_id.end()) {
          add_character(ref, Gender::unknown, false);
          it = index_by_id.find(ref);
          if (report)
            report->warn(play.corpus_id, play.play_id,
                         "speaker reference '" + ref + "' has no declared character");
        }
        play.characters[it->second].utterances.push_back(utterance);
      }
    });
  }

  for (auto& character : play.characters)
    character.word_count = spoken_word_count(character.utterances);

  if (play.characters.empty())
    throw std::runtime_error("TEI document declares no characters and contains no speech");
  return play;
}

}  // namespace dramatis
