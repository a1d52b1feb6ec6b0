#include "sdqc/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdqc/error.hpp"
#include "sdqc/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdqc {

const double* EmbeddingProvider::lookup(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return nullptr;
  return matrix_.data() + it->second * dimension_;
}

void EmbeddingProvider::insert(const std::string& word,
                               const std::vector<double>& vector) {
  if (static_cast<int>(vector.size()) != dimension_) {
    throw Error(ErrorCode::InconsistentDimension,
                "vector for '" + word + "' has " +
                    std::to_string(vector.size()) + " entries, expected " +
                    std::to_string(dimension_));
  }
  auto [it, inserted] = index_.emplace(word, words_.size());
  if (!inserted) {
    std::copy(vector.begin(), vector.end(),
              matrix_.begin() + it->second * dimension_);
    return;
  }
  words_.push_back(word);
  matrix_.insert(matrix_.end(), vector.begin(), vector.end());
}

EmbeddingProvider EmbeddingProvider::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open embedding file " + path);
  }
  EmbeddingProvider provider;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    std::vector<double> values;
    double v;
    while (ss >> v) values.push_back(v);
    if (!ss.eof()) {
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(lineno) + ": bad float");
    }
    if (provider.dimension_ == 0) {
      if (values.empty()) {
        throw Error(ErrorCode::MalformedLine,
                    path + ":" + std::to_string(lineno) + ": no values");
      }
      provider.dimension_ = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != provider.dimension_) {
      throw Error(ErrorCode::InconsistentDimension,
                  path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(provider.dimension_) + " floats, got " +
                      std::to_string(values.size()));
    }
    provider.insert(word, values);
  }
  return provider;
}

void EmbeddingProvider::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write embedding file " + path);
  }
  char buf[64];
  for (std::size_t w = 0; w < words_.size(); ++w) {
    out << words_[w];
    const double* row = matrix_.data() + w * dimension_;
    for (int d = 0; d < dimension_; ++d) {
      std::snprintf(buf, sizeof(buf), " %.17g", row[d]);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<double> average_embedding(const TokenList& tokens,
                                      const EmbeddingProvider& provider) {
  std::vector<double> mean(provider.dimension(), 0.0);
  std::size_t hits = 0;
  for (const std::string& word : tokens.normalized) {
    if (word.empty()) continue;
    const double* row = provider.lookup(word);
    if (!row) continue;
    for (int d = 0; d < provider.dimension(); ++d) mean[d] += row[d];
    ++hits;
  }
  if (hits > 0) {
    for (double& v : mean) v /= static_cast<double>(hits);
  }
  return mean;
}

namespace {

struct SgnsState {
  std::vector<std::string> vocab_words;
  std::vector<std::int64_t> counts;
  std::unordered_map<std::string, int> word_to_id;
  std::vector<std::vector<int>> sentences;  // token ids, OOV removed
  std::vector<int> unigram_table;
  std::int64_t corpus_tokens = 0;
};

SgnsState prepare(const std::vector<TokenList>& corpus,
                  const EmbeddingConfig& config) {
  SgnsState st;
  std::unordered_map<std::string, std::int64_t> freq;
  for (const TokenList& sentence : corpus) {
    for (const std::string& word : sentence.normalized) {
      if (!word.empty()) freq[word]++;
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (auto& [word, count] : freq) {
    if (count >= config.min_count) kept.emplace_back(word, count);
  }
  // Descending count, ascending word: a total order independent of hash
  // iteration.
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (auto& [word, count] : kept) {
    st.word_to_id.emplace(word, static_cast<int>(st.vocab_words.size()));
    st.vocab_words.push_back(word);
    st.counts.push_back(count);
  }

  for (const TokenList& sentence : corpus) {
    std::vector<int> ids;
    for (const std::string& word : sentence.normalized) {
      auto it = st.word_to_id.find(word);
      if (it != st.word_to_id.end()) ids.push_back(it->second);
    }
    st.corpus_tokens += static_cast<std::int64_t>(ids.size());
    st.sentences.push_back(std::move(ids));
  }

  if (!st.vocab_words.empty()) {
    // Unigram table with counts raised to the 3/4 power.
    st.unigram_table.resize(config.unigram_table_size);
    double total = 0.0;
    for (std::int64_t c : st.counts) total += std::pow(double(c), 0.75);
    std::size_t i = 0;
    double cumulative = std::pow(double(st.counts[0]), 0.75) / total;
    for (std::size_t a = 0; a < st.unigram_table.size(); ++a) {
      st.unigram_table[a] = static_cast<int>(i);
      if (double(a + 1) / double(st.unigram_table.size()) > cumulative &&
          i + 1 < st.vocab_words.size()) {
        ++i;
        cumulative += std::pow(double(st.counts[i]), 0.75) / total;
      }
    }
  }
  return st;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One SGD pass over a slice of sentences. `words_done` is the decay clock;
// in the serial path it advances exactly in sentence order.
void train_slice(const SgnsState& st, const EmbeddingConfig& config,
                 std::size_t begin, std::size_t end, Rng& rng,
                 std::vector<double>& syn0, std::vector<double>& syn1,
                 std::int64_t total_words, std::int64_t& words_done) {
  const int dim = config.dimension;
  std::vector<double> grad_in(dim);
  for (std::size_t s = begin; s < end; ++s) {
    const std::vector<int>& sent = st.sentences[s];
    double progress =
        total_words > 0 ? double(words_done) / double(total_words) : 1.0;
    double alpha =
        config.learning_rate * std::max(1.0 - progress, 1e-4);
    for (std::size_t pos = 0; pos < sent.size(); ++pos) {
      const int center = sent[pos];
      const int dyn = 1 + static_cast<int>(rng.next_below(config.window));
      for (int off = -dyn; off <= dyn; ++off) {
        if (off == 0) continue;
        std::int64_t c = static_cast<std::int64_t>(pos) + off;
        if (c < 0 || c >= static_cast<std::int64_t>(sent.size())) continue;
        const int context = sent[c];
        double* in = syn0.data() + std::size_t(context) * dim;
        std::fill(grad_in.begin(), grad_in.end(), 0.0);
        for (int k = 0; k <= config.negative; ++k) {
          int target;
          double gold;
          if (k == 0) {
            target = center;
            gold = 1.0;
          } else {
            target = st.unigram_table[rng.next_below(st.unigram_table.size())];
            if (target == center) continue;
            gold = 0.0;
          }
          double* out = syn1.data() + std::size_t(target) * dim;
          double dot = 0.0;
          for (int d = 0; d < dim; ++d) dot += in[d] * out[d];
          const double g = (gold - sigmoid(dot)) * alpha;
          for (int d = 0; d < dim; ++d) grad_in[d] += g * out[d];
          for (int d = 0; d < dim; ++d) out[d] += g * in[d];
        }
        for (int d = 0; d < dim; ++d) in[d] += grad_in[d];
      }
    }
    words_done += static_cast<std::int64_t>(sent.size());
  }
}

}  // namespace

EmbeddingProvider train_embeddings(const std::vector<TokenList>& corpus,
                                   const EmbeddingConfig& config) {
  if (corpus.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no sentences to train on");
  }
  if (config.dimension < 1) {
    throw Error(ErrorCode::InvalidSpec, "embedding dimension must be >= 1");
  }

  SgnsState st = prepare(corpus, config);
  if (st.vocab_words.empty()) {
    throw Error(ErrorCode::EmptyCorpus,
                "no token reaches min_count; nothing to train on");
  }
  const int dim = config.dimension;
  const std::size_t vocab = st.vocab_words.size();

  std::vector<double> syn0(vocab * dim), syn1(vocab * dim, 0.0);
  Rng init_rng(derive_seed(config.seed, "sgns-init"));
  for (double& v : syn0) {
    v = (init_rng.next_double() - 0.5) / dim;
  }

  const std::int64_t total_words =
      st.corpus_tokens * std::max(config.epochs, 0);

  if (config.threads <= 1) {
    Rng rng(derive_seed(config.seed, "sgns-train"));
    std::int64_t words_done = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      train_slice(st, config, 0, st.sentences.size(), rng, syn0, syn1,
                  total_words, words_done);
    }
  } else {
    // Lock-free parallel updates over sentence chunks; not bit-reproducible.
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
#ifdef _OPENMP
#pragma omp parallel num_threads(config.threads)
      {
        const int tid = omp_get_thread_num();
        const int nthreads = omp_get_num_threads();
#else
      {
        const int tid = 0;
        const int nthreads = 1;
#endif
        const std::size_t per =
            (st.sentences.size() + nthreads - 1) / nthreads;
        const std::size_t begin = std::min(per * tid, st.sentences.size());
        const std::size_t end = std::min(begin + per, st.sentences.size());
        Rng rng(derive_seed(config.seed,
                            "sgns-thread-" + std::to_string(tid) + "-" +
                                std::to_string(epoch)));
        std::int64_t words_done =
            st.corpus_tokens * epoch;  // coarse decay clock
        train_slice(st, config, begin, end, rng, syn0, syn1, total_words,
                    words_done);
      }
    }
  }

  EmbeddingProvider provider(dim);
  std::vector<double> row(dim);
  for (std::size_t w = 0; w < vocab; ++w) {
    std::copy(syn0.begin() + w * dim, syn0.begin() + (w + 1) * dim,
              row.begin());
    provider.insert(st.vocab_words[w], row);
  }
  return provider;
}

}  // namespace sdqc
