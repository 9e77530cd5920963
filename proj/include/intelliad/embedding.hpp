#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "intelliad/reviews.hpp"

namespace intelliad::reviews {

/// Word -> dense vector, all of one dimension.
struct WordVectors {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>, std::less<>> vectors;

  const std::vector<double>* find(std::string_view word) const {
    auto it = vectors.find(word);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

/// Positive PMI co-occurrence vectors from a tokenized corpus. Pairs within
/// `window` positions are counted symmetrically. Columns are the `dim` most
/// frequent context words (ties broken alphabetically), zero-padded when the
/// vocabulary is smaller; rows are scaled to unit length.
WordVectors ppmi_word_vectors(const std::vector<std::vector<std::string>>& docs, std::size_t dim,
                              std::size_t window = 2);

/// word2vec text format: "word v1 v2 ..." per line, with an optional
/// "<count> <dim>" header. Rows of differing length raise DimensionMismatch.
WordVectors parse_word_vectors(std::string_view text);
WordVectors load_word_vectors(const std::filesystem::path& path);

struct PhraseVector {
  PhraseCandidate phrase;
  std::vector<double> vector;
};

/// Phrase vector = mean of its two word vectors. A word missing from
/// `vectors` contributes zeros and adds a warning.
std::vector<PhraseVector> embed_phrases(const std::vector<PhraseCandidate>& candidates,
                                        const WordVectors& vectors,
                                        std::vector<std::string>* warnings = nullptr);

/// k-means over the phrase vectors; cluster id -> phrases in input order.
std::map<std::size_t, std::vector<PhraseCandidate>> cluster_phrases(
    const std::vector<PhraseVector>& vectors, std::size_t k, std::uint64_t seed);

}  // namespace intelliad::reviews
