#include "intelliad/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "intelliad/error.hpp"
#include "intelliad/io.hpp"
#include "intelliad/kmeans.hpp"
#include "intelliad/simd/kernels.hpp"

namespace intelliad::reviews {

WordVectors ppmi_word_vectors(const std::vector<std::vector<std::string>>& docs, std::size_t dim,
                              std::size_t window) {
  std::map<std::string, std::map<std::string, double>> pairs;
  std::map<std::string, double> context_total;
  double grand_total = 0.0;
  for (const auto& doc : docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      pairs[doc[i]];
      const std::size_t hi = std::min(doc.size(), i + window + 1);
      for (std::size_t j = i + 1; j < hi; ++j) {
        pairs[doc[i]][doc[j]] += 1.0;
        pairs[doc[j]][doc[i]] += 1.0;
        context_total[doc[i]] += 1.0;
        context_total[doc[j]] += 1.0;
        grand_total += 2.0;
      }
    }
  }

  std::vector<std::pair<std::string, double>> ranked(context_total.begin(), context_total.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > dim) ranked.resize(dim);

  WordVectors out;
  out.dim = dim;
  for (const auto& [word, row] : pairs) {
    std::vector<double> v(dim, 0.0);
    const auto wt = context_total.find(word);
    if (wt != context_total.end()) {
      for (std::size_t c = 0; c < ranked.size(); ++c) {
        const auto hit = row.find(ranked[c].first);
        if (hit == row.end()) continue;
        const double pmi = std::log(hit->second * grand_total / (wt->second * ranked[c].second));
        v[c] = std::max(0.0, pmi);
      }
    }
    const double norm = std::sqrt(simd::dot(v, v));
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
    out.vectors.emplace(word, std::move(v));
  }
  return out;
}

WordVectors parse_word_vectors(std::string_view text) {
  WordVectors out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool dim_known = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(std::move(f));
    if (parts.empty()) continue;

    if (line_no == 1 && parts.size() == 2) {
      std::size_t count = 0, dim = 0;
      auto parse_size = [](const std::string& s, std::size_t& v) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc{} && p == s.data() + s.size();
      };
      if (parse_size(parts[0], count) && parse_size(parts[1], dim)) {
        out.dim = dim;
        dim_known = true;
        continue;
      }
    }

    std::vector<double> v;
    v.reserve(parts.size() - 1);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      double x = 0.0;
      const std::string& s = parts[i];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(x)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "line " + std::to_string(line_no) + ": bad component '" + s + "'", line_no);
      }
      v.push_back(x);
    }
    if (!dim_known) {
      out.dim = v.size();
      dim_known = true;
    }
    if (v.size() != out.dim || v.empty()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(out.dim) +
                      " components, got " + std::to_string(v.size()),
                  line_no);
    }
    out.vectors[parts[0]] = std::move(v);
  }
  return out;
}

WordVectors load_word_vectors(const std::filesystem::path& path) {
  return parse_word_vectors(io::read_file(path));
}

std::vector<PhraseVector> embed_phrases(const std::vector<PhraseCandidate>& candidates,
                                        const WordVectors& vectors,
                                        std::vector<std::string>* warnings) {
  std::vector<PhraseVector> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    PhraseVector pv{c, std::vector<double>(vectors.dim, 0.0)};
    for (const auto& word : c.tokens) {
      if (const auto* v = vectors.find(word)) {
        simd::accumulate(pv.vector, *v);
      } else if (warnings) {
        warnings->push_back("MissingWord: '" + word + "' in phrase '" + c.text() + "'");
      }
    }
    for (double& x : pv.vector) x *= 0.5;
    out.push_back(std::move(pv));
  }
  return out;
}

std::map<std::size_t, std::vector<PhraseCandidate>> cluster_phrases(
    const std::vector<PhraseVector>& vectors, std::size_t k, std::uint64_t seed) {
  std::vector<cluster::Point> points;
  points.reserve(vectors.size());
  for (const auto& pv : vectors) points.push_back(pv.vector);
  const auto result = cluster::kmeans(points, k, seed);
  std::map<std::size_t, std::vector<PhraseCandidate>> out;
  for (std::size_t c = 0; c < k; ++c) out[c];
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out[result.assignment[i]].push_back(vectors[i].phrase);
  }
  return out;
}

}  // namespace intelliad::reviews
