#include "dramatis/keyness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dramatis {

WordCounts WordCounts::from_tokens(const TokenStream& tokens) {
  std::map<std::string, double> acc;
  for (const auto& w : tokens.words) acc[w] += 1.0;
  WordCounts wc;
  wc.items_.assign(acc.begin(), acc.end());
  wc.total_ = static_cast<double>(tokens.total());
  return wc;
}

WordCounts WordCounts::from_items(std::vector<std::pair<std::string, double>> items) {
  WordCounts wc;
  wc.items_ = std::move(items);
  std::sort(wc.items_.begin(), wc.items_.end());
  for (size_t i = 0; i < wc.items_.size(); ++i) {
    const auto& [word, count] = wc.items_[i];
    if (count < 0.0) throw std::invalid_argument("WordCounts: negative count for " + word);
    if (i > 0 && wc.items_[i - 1].first == word)
      throw std::invalid_argument("WordCounts: duplicate word " + word);
    wc.total_ += count;
  }
  return wc;
}

double WordCounts::count_of(std::string_view word) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), word,
                             [](const auto& item, std::string_view w) { return item.first < w; });
  if (it != items_.end() && it->first == word) return it->second;
  return 0.0;
}

void WordCounts::add(const WordCounts& other) {
  std::vector<std::pair<std::string, double>> merged;
  merged.reserve(items_.size() + other.items_.size());
  auto a = items_.begin();
  auto b = other.items_.begin();
  while (a != items_.end() || b != other.items_.end()) {
    if (b == other.items_.end() || (a != items_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == items_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      merged.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  items_ = std::move(merged);
  total_ += other.total_;
}

void WordCounts::scale(double factor) {
  if (factor < 0.0) throw std::invalid_argument("WordCounts::scale: negative factor");
  for (auto& [word, count] : items_) count *= factor;
  total_ *= factor;
}

std::vector<std::pair<std::string, double>> weighted_log_odds(const WordCounts& a,
                                                              const WordCounts& b,
                                                              const WordCounts& prior,
                                                              double prior_mass) {
  if (prior_mass <= 0.0) throw std::invalid_argument("weighted_log_odds: prior_mass must be > 0");
  if (prior.total() <= 0.0) throw std::invalid_argument("weighted_log_odds: empty prior");
  for (const auto& side : {&a, &b})
    for (const auto& [word, count] : side->items())
      if (count > 0.0 && prior.count_of(word) <= 0.0)
        throw std::invalid_argument("weighted_log_odds: word outside prior support: " + word);

  const double n_a = a.total();
  const double n_b = b.total();
  std::vector<std::pair<std::string, double>> zscores;
  zscores.reserve(prior.items().size());
  for (const auto& [word, prior_count] : prior.items()) {
    const double alpha_w = prior_mass * prior_count / prior.total();
    const double a_w = a.count_of(word);
    const double b_w = b.count_of(word);
    const double denom_a = n_a + prior_mass - a_w - alpha_w;
    const double denom_b = n_b + prior_mass - b_w - alpha_w;
    if (a_w + alpha_w <= 0.0 || b_w + alpha_w <= 0.0 || denom_a <= 0.0 || denom_b <= 0.0)
      throw std::invalid_argument("weighted_log_odds: non-positive odds term for word: " + word);
    const double delta =
        std::log((a_w + alpha_w) / denom_a) - std::log((b_w + alpha_w) / denom_b);
    const double variance = 1.0 / (a_w + alpha_w) + 1.0 / (b_w + alpha_w);
    zscores.emplace_back(word, delta / std::sqrt(variance));
  }
  return zscores;
}

namespace {

// Ranked top slice: z descending, ties by word ascending.
std::vector<std::pair<std::string, double>> ranked(
    const std::vector<std::pair<std::string, double>>& zscores) {
  std::vector<std::pair<std::string, double>> by_rank(zscores);
  std::sort(by_rank.begin(), by_rank.end(), [](const auto& l, const auto& r) {
    if (l.second != r.second) return l.second > r.second;
    return l.first < r.first;
  });
  return by_rank;
}

KeynessProfile profile_from_zscores(std::vector<std::pair<std::string, double>> zscores) {
  KeynessProfile profile;
  auto by_rank = ranked(zscores);
  profile.zscores = std::move(zscores);
  const size_t take = std::min<size_t>(kKeynessCurveLength, by_rank.size());
  profile.top_curve.reserve(kKeynessCurveLength);
  for (size_t i = 0; i < take; ++i) {
    profile.top_words.push_back(by_rank[i].first);
    profile.top_curve.push_back(by_rank[i].second);
  }
  profile.top_curve.resize(kKeynessCurveLength, 0.0);
  double auc = 0.0;
  for (double z : profile.top_curve) auc += z;
  profile.auc = auc;
  return profile;
}

}  // namespace

KeynessProfile character_keyness_counts(const WordCounts& character_counts,
                                        const WordCounts& other_counts,
                                        double prior_mass) {
  if (character_counts.total() <= 0.0)
    throw std::invalid_argument("character_keyness: empty character word pool");
  if (other_counts.total() <= 0.0)
    throw std::invalid_argument("character_keyness: empty others word pool");

  WordCounts prior = character_counts;
  prior.add(other_counts);

  // Upsample the character pool to the size of the rest of the cast.
  WordCounts scaled = character_counts;
  scaled.scale(other_counts.total() / character_counts.total());

  WordCounts scaled_prior = prior;
  scaled_prior.scale(prior_mass / prior.total());

  return profile_from_zscores(
      weighted_log_odds(scaled, other_counts, scaled_prior, prior_mass));
}

KeynessProfile character_keyness(const TokenStream& character_words,
                                 const TokenStream& other_words, double prior_mass) {
  return character_keyness_counts(WordCounts::from_tokens(character_words),
                                  WordCounts::from_tokens(other_words), prior_mass);
}

ContrastTable gender_contrast(std::span<const PlayDocument> corpus, Gender side_a,
                              Gender side_b, double prior_mass, int top_n) {
  WordCounts pool_a, pool_b;
  for (const auto& play : corpus) {
    for (const auto& character : play.characters) {
      if (character.gender != side_a && character.gender != side_b) continue;
      std::map<std::string, double> acc;
      double total = 0.0;
      for (const auto& utterance : character.utterances)
        for (auto& word : word_tokens(utterance).words) {
          acc[word] += 1.0;
          total += 1.0;
        }
      if (total == 0.0) continue;
      WordCounts counts = WordCounts::from_items({acc.begin(), acc.end()});
      if (character.gender == side_a)
        pool_a.add(counts);
      else
        pool_b.add(counts);
    }
  }
  if (pool_a.total() <= 0.0)
    throw std::invalid_argument(std::string("gender_contrast: no words for gender ") +
                                to_string(side_a));
  if (pool_b.total() <= 0.0)
    throw std::invalid_argument(std::string("gender_contrast: no words for gender ") +
                                to_string(side_b));

  WordCounts prior = pool_a;
  prior.add(pool_b);
  WordCounts scaled_prior = prior;
  scaled_prior.scale(prior_mass / prior.total());

  const auto zscores = weighted_log_odds(pool_a, pool_b, scaled_prior, prior_mass);

  ContrastTable table;
  table.side_a = side_a;
  table.side_b = side_b;
  auto by_rank = ranked(zscores);
  const size_t take_a = std::min<size_t>(static_cast<size_t>(top_n), by_rank.size());
  for (size_t i = 0; i < take_a; ++i) table.words_a.push_back(by_rank[i]);
  // Side b reads best from the other end, z reported positive for b.
  std::sort(by_rank.begin(), by_rank.end(), [](const auto& l, const auto& r) {
    if (l.second != r.second) return l.second < r.second;
    return l.first < r.first;
  });
  const size_t take_b = std::min<size_t>(static_cast<size_t>(top_n), by_rank.size());
  for (size_t i = 0; i < take_b; ++i)
    table.words_b.emplace_back(by_rank[i].first, -by_rank[i].second);
  return table;
}

}  // namespace dramatis
