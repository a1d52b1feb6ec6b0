#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdqc/tokenize.hpp"

namespace sdqc {

struct EmbeddingConfig {
  int dimension = 300;
  int window = 5;
  int negative = 5;
  int epochs = 5;
  int min_count = 2;
  double learning_rate = 0.025;  // linearly decayed
  std::uint64_t seed = 1;
  // 1 keeps training bit-reproducible; >1 enables lock-free parallel updates
  // which trade reproducibility for speed.
  int threads = 1;
  std::size_t unigram_table_size = 1 << 20;
};

// Word -> dense vector map with a single declared dimension. Lookups of
// unknown words return nullptr, never a wrong-size vector.
class EmbeddingProvider {
 public:
  EmbeddingProvider() = default;
  explicit EmbeddingProvider(int dimension) : dimension_(dimension) {}

  int dimension() const { return dimension_; }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // Pointer to `dimension()` doubles, or nullptr when absent.
  const double* lookup(const std::string& word) const;
  void insert(const std::string& word, const std::vector<double>& vector);

  // Plain text format: one entry per line, `word SP float x d`; the first
  // line defines d.
  static EmbeddingProvider load(const std::string& path);
  void save(const std::string& path) const;

 private:
  int dimension_ = 0;
  std::vector<std::string> words_;        // insertion order
  std::vector<double> matrix_;            // row per word
  std::unordered_map<std::string, std::size_t> index_;
};

// Skip-gram with negative sampling over normalized tokens. Deterministic
// given config.seed when config.threads == 1. Vocabulary keeps tokens with
// frequency >= config.min_count, ordered by descending count then word.
EmbeddingProvider train_embeddings(const std::vector<TokenList>& corpus,
                                   const EmbeddingConfig& config);

// Arithmetic mean over in-vocabulary normalized tokens; the zero vector when
// nothing is in vocabulary.
std::vector<double> average_embedding(const TokenList& tokens,
                                      const EmbeddingProvider& provider);

}  // namespace sdqc
