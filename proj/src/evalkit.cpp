// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include "relex/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "relex/error.hpp"
#include "relex/text.hpp"

namespace relex {

namespace {

std::string strip_brackets(std::string s) {
    if (s.size() >= 2 && s.front() == '<' && s.back() == '>') return s.substr(1, s.size() - 2);
    return s;
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error(std::string("cannot open ") + what + ": " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parses "<e1> <e2> type" and returns the key; `lineno` for errors.
GoldKey parse_key(const std::string& head, std::size_t lineno) {
    std::istringstream ls(head);
    std::string a, b, type, extra;
    ls >> a >> b >> type;
    if (type.empty()) throw ParseError("expected '<entity1> <entity2> <relationship_type>'", lineno, 1, head);
    if (ls >> extra) throw ParseError("unexpected field before TAB", lineno, 0, extra);
    return gold_key(Iri(strip_brackets(a)), Iri(strip_brackets(b)), type);
}

template <typename Fn>
void for_each_line(std::string_view source, Fn&& fn) {
    std::istringstream in{std::string(source)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        fn(line, lineno);
    }
}

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts ngrams(const Tokens& toks, std::size_t n) {
    NgramCounts out;
    if (toks.size() < n) return out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        std::string key;
        for (std::size_t k = 0; k < n; ++k) {
            if (k) key += '\x1f';
            key += toks[i + k];
        }
        ++out[key];
    }
    return out;
}

// Exact search for the alignment with the most adjacent links among all
// maximum alignments; chunks = matches - links. Memoised on
// (position, previous reference index, used reference positions).
class ChunkSearch {
public:
    ChunkSearch(const Tokens& cand, const Tokens& ref) : cand_(cand), ref_(ref), used_(ref.size(), false) {
        std::unordered_map<std::string, std::size_t> cc, rc;
        for (const auto& t : cand) ++cc[t];
        for (const auto& t : ref) ++rc[t];
        for (const auto& [t, n] : cc) {
            auto r = rc.count(t) ? rc[t] : 0;
            slack_[t] = n - std::min(n, r);
            matches_ += std::min(n, r);
        }
        for (std::size_t j = 0; j < ref.size(); ++j) positions_[ref[j]].push_back(j);
    }

    std::size_t matches() const { return matches_; }

    std::size_t chunks() {
        if (matches_ == 0) return 0;
        return matches_ - best_links(0, kNone);
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    std::string key(std::size_t i, std::size_t prev) const {
        std::string k = std::to_string(i) + ':' + std::to_string(prev) + ':';
        for (bool b : used_) k += b ? '1' : '0';
        return k;
    }

    std::size_t best_links(std::size_t i, std::size_t prev) {
        if (i == cand_.size()) return 0;
        auto k = key(i, prev);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;

        const auto& tok = cand_[i];
        std::size_t best = 0;
        bool any = false;
        auto& slack = slack_[tok];
        if (slack > 0) {
            --slack;
            best = best_links(i + 1, kNone);
            any = true;
            ++slack;
        }
        if (auto pit = positions_.find(tok); pit != positions_.end()) {
            for (auto j : pit->second) {
                if (used_[j]) continue;
                used_[j] = true;
                std::size_t link = (prev != kNone && j == prev + 1) ? 1 : 0;
                std::size_t v = link + best_links(i + 1, j);
                used_[j] = false;
                if (!any || v > best) best = v;
                any = true;
            }
        }
        memo_.emplace(std::move(k), best);
        return best;
    }

    const Tokens& cand_;
    const Tokens& ref_;
    std::vector<bool> used_;
    std::unordered_map<std::string, std::size_t> slack_;
    std::unordered_map<std::string, std::vector<std::size_t>> positions_;
    std::unordered_map<std::string, std::size_t> memo_;
    std::size_t matches_ = 0;
};

void require_nonempty(const Tokens& t, const char* what) {
    if (t.empty()) throw DomainError(std::string(what) + " must not be empty");
}

}  // namespace

GoldKey gold_key(const Iri& e1, const Iri& e2, const std::string& relationship_type) {
    const auto& a = e1.value();
    const auto& b = e2.value();
    return a <= b ? GoldKey{a, b, relationship_type} : GoldKey{b, a, relationship_type};
}

GoldStandard parse_gold_standard(std::string_view source) {
    GoldStandard g;
    for_each_line(source, [&](const std::string& line, std::size_t lineno) {
        auto tab = line.find('\t');
        auto key = parse_key(line.substr(0, tab), lineno);
        auto [it, inserted] = g.references.try_emplace(key);
        if (inserted) g.entries.push_back(key);
        if (tab != std::string::npos) {
            auto ref = line.substr(tab + 1);
            if (ref.find_first_not_of(" \t") != std::string::npos) it->second.push_back(ref);
        }
    });
    return g;
}

GoldStandard load_gold_standard_file(const std::string& path) {
    return parse_gold_standard(read_file(path, "gold standard"));
}

std::vector<RelevanceRating> parse_ratings(std::string_view source) {
    std::vector<RelevanceRating> out;
    for_each_line(source, [&](const std::string& line, std::size_t lineno) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected TAB before rating", lineno, 0, line);
        auto key = parse_key(line.substr(0, tab), lineno);
        try {
            std::size_t used = 0;
            auto text = line.substr(tab + 1);
            double v = std::stod(text, &used);
            if (text.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(text);
            out.push_back({key, v});
        } catch (const std::logic_error&) {
            throw ParseError("rating is not a number", lineno, tab + 2, line.substr(tab + 1));
        }
    });
    return out;
}

std::vector<RelevanceRating> load_ratings_file(const std::string& path) {
    return parse_ratings(read_file(path, "ratings file"));
}

RetrievalScores precision_recall_f1(std::span<const ConnectionInstance> retrieved, const GoldStandard& gold) {
    if (gold.entries.empty()) throw DomainError("gold standard is empty");
    std::set<GoldKey> keys;
    for (const auto& c : retrieved) keys.insert(gold_key(c.entity1, c.entity2, c.relationship_type));
    std::size_t hits = 0;
    for (const auto& k : keys) hits += gold.contains(k) ? 1 : 0;
    RetrievalScores s;
    if (!keys.empty()) s.precision = static_cast<double>(hits) / static_cast<double>(keys.size());
    s.recall = static_cast<double>(hits) / static_cast<double>(gold.entries.size());
    if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

double bleu(const Tokens& candidate, std::span<const Tokens> references) {
    require_nonempty(candidate, "BLEU candidate");
    std::vector<const Tokens*> refs;
    for (const auto& r : references)
        if (!r.empty()) refs.push_back(&r);
    if (refs.empty()) throw DomainError("BLEU needs at least one non-empty reference");

    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto cand = ngrams(candidate, n);
        NgramCounts max_ref;
        for (const auto* r : refs)
            for (const auto& [g, c] : ngrams(*r, n)) max_ref[g] = std::max(max_ref[g], c);
        std::size_t total = 0, clipped = 0;
        for (const auto& [g, c] : cand) {
            total += c;
            auto it = max_ref.find(g);
            if (it != max_ref.end()) clipped += std::min(c, it->second);
        }
        double p = (total == 0 || clipped == 0) ? kBleuEpsilon : static_cast<double>(clipped) / total;
        log_sum += std::log(p);
    }

    const double c = static_cast<double>(candidate.size());
    std::size_t closest = refs.front()->size();
    for (const auto* r : refs) {
        auto d = std::abs(static_cast<long>(r->size()) - static_cast<long>(candidate.size()));
        auto best = std::abs(static_cast<long>(closest) - static_cast<long>(candidate.size()));
        if (d < best || (d == best && r->size() < closest)) closest = r->size();
    }
    const double r = static_cast<double>(closest);
    double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
    return bp * std::exp(log_sum / 4.0);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(const Tokens& candidate, const Tokens& reference) {
    require_nonempty(candidate, "ROUGE-L candidate");
    require_nonempty(reference, "ROUGE-L reference");
    auto lcs = static_cast<double>(lcs_length(candidate, reference));
    if (lcs == 0.0) return 0.0;
    double p = lcs / static_cast<double>(candidate.size());
    double r = lcs / static_cast<double>(reference.size());
    constexpr double b2 = kRougeBeta * kRougeBeta;
    return (1.0 + b2) * p * r / (r + b2 * p);
}

std::size_t min_chunks(const Tokens& candidate, const Tokens& reference) {
    return ChunkSearch(candidate, reference).chunks();
}

double meteor_lite(const Tokens& candidate, const Tokens& reference) {
    require_nonempty(candidate, "METEOR candidate");
    require_nonempty(reference, "METEOR reference");
    ChunkSearch search(candidate, reference);
    auto m = static_cast<double>(search.matches());
    if (m == 0.0) return 0.0;
    auto chunks = static_cast<double>(search.chunks());
    double p = m / static_cast<double>(candidate.size());
    double r = m / static_cast<double>(reference.size());
    double fmean = 10.0 * p * r / (r + 9.0 * p);
    double penalty = 0.5 * (chunks * chunks * chunks) / (m * m * m);
    return fmean * (1.0 - penalty);
}

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DomainError("spearman inputs differ in length");
    if (xs.size() < 2) throw DomainError("spearman needs at least two observations");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    if (constant(xs) || constant(ys)) throw DomainError("spearman input is constant");
    auto rx = average_ranks(xs);
    auto ry = average_ranks(ys);
    const double n = static_cast<double>(rx.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Diversity diversity(std::span<const std::string> explanations, std::span<const ConnectionInstance> connections) {
    Diversity d;
    std::set<std::string> uni, bi;
    std::size_t n_uni = 0, n_bi = 0;
    for (const auto& text : explanations) {
        auto toks = tokenize(text);
        for (std::size_t i = 0; i < toks.size(); ++i) {
            uni.insert(toks[i]);
            ++n_uni;
            if (i + 1 < toks.size()) {
                bi.insert(toks[i] + '\x1f' + toks[i + 1]);
                ++n_bi;
            }
        }
    }
    if (n_uni) d.distinct1 = static_cast<double>(uni.size()) / static_cast<double>(n_uni);
    if (n_bi) d.distinct2 = static_cast<double>(bi.size()) / static_cast<double>(n_bi);
    std::set<std::string> types;
    for (const auto& c : connections) types.insert(c.relationship_type);
    d.type_count = types.size();
    return d;
}

MetricsReport evaluate_system(std::span<const SystemOutput> outputs, const GoldStandard& gold,
                              std::span<const ScorePair> score_pairs) {
    MetricsReport r;
    std::vector<ConnectionInstance> conns;
    std::vector<std::string> texts;
    conns.reserve(outputs.size());
    texts.reserve(outputs.size());
    for (const auto& o : outputs) {
        conns.push_back(o.connection);
        texts.push_back(o.explanation);
    }
    auto prf = precision_recall_f1(conns, gold);
    r.precision = prf.precision;
    r.recall = prf.recall;
    r.f1 = prf.f1;
    r.retrieved = outputs.size();

    std::set<GoldKey> scored;
    double sb = 0.0, sr = 0.0, sm = 0.0;
    for (const auto& o : outputs) {
        auto key = gold_key(o.connection.entity1, o.connection.entity2, o.connection.relationship_type);
        auto it = gold.references.find(key);
        if (it == gold.references.end() || it->second.empty() || !scored.insert(key).second) continue;
        std::vector<Tokens> refs;
        for (const auto& ref : it->second) refs.push_back(tokenize(ref));
        auto cand = tokenize(o.explanation);
        if (!cand.empty()) {
            sb += bleu(cand, refs);
            double best_r = 0.0, best_m = 0.0;
            for (const auto& ref : refs) {
                if (ref.empty()) continue;
                best_r = std::max(best_r, rouge_l(cand, ref));
                best_m = std::max(best_m, meteor_lite(cand, ref));
            }
            sr += best_r;
            sm += best_m;
        }
    }
    r.text_scored = scored.size();
    if (!scored.empty()) {
        auto n = static_cast<double>(scored.size());
        r.bleu = sb / n;
        r.rouge_l = sr / n;
        r.meteor = sm / n;
    }

    if (score_pairs.size() >= 2) {
        std::vector<double> xs, ys;
        for (const auto& p : score_pairs) {
            xs.push_back(p.model_score);
            ys.push_back(p.rating);
        }
        r.spearman = spearman(xs, ys);
    }

    auto div = diversity(texts, conns);
    r.diversity_distinct1 = div.distinct1;
    r.diversity_distinct2 = div.distinct2;
    r.diversity_type_count = div.type_count;
    return r;
}

std::string format_report_text(const MetricsReport& r) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        return std::string(buf);
    };
    std::string out;
    out += "precision: " + num(r.precision) + "\n";
    out += "recall: " + num(r.recall) + "\n";
    out += "f1: " + num(r.f1) + "\n";
    out += "bleu: " + num(r.bleu) + "\n";
    out += "rouge_l: " + num(r.rouge_l) + "\n";
    out += "meteor: " + num(r.meteor) + "\n";
    out += "spearman: " + (r.spearman ? num(*r.spearman) : std::string("n/a")) + "\n";
    out += "diversity_distinct1: " + num(r.diversity_distinct1) + "\n";
    out += "diversity_distinct2: " + num(r.diversity_distinct2) + "\n";
    out += "diversity_type_count: " + std::to_string(r.diversity_type_count) + "\n";
    out += "retrieved: " + std::to_string(r.retrieved) + "\n";
    out += "text_scored: " + std::to_string(r.text_scored) + "\n";
    return out;
}

}  // namespace relex
