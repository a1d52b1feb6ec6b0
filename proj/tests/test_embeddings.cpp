// Skip-gram embedding training: determinism, vocabulary rules, averaging,
// similarity structure and file round-trips.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "sdqc/embeddings.hpp"
#include "sdqc/error.hpp"
#include "sdqc/tokenize.hpp"

using namespace sdqc;

namespace {

std::vector<TokenList> corpus_from(const std::vector<std::string>& lines) {
  std::vector<TokenList> corpus;
  for (const std::string& line : lines) corpus.push_back(tokenize(line));
  return corpus;
}

double cosine(const double* a, const double* b, int d) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int k = 0; k < d; ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

TEST_CASE("training is bitwise deterministic for a fixed seed") {
  const std::vector<TokenList> corpus = corpus_from({
      "the cat sat on the mat",
      "the dog sat on the rug",
      "a cat and a dog met on the mat",
  });
  EmbeddingConfig config;
  config.dimension = 8;
  config.epochs = 3;
  config.min_count = 1;
  config.seed = 42;

  const EmbeddingProvider a = train_embeddings(corpus, config);
  const EmbeddingProvider b = train_embeddings(corpus, config);
  REQUIRE(a.vocab_size() == b.vocab_size());
  CHECK(a.words() == b.words());
  for (const std::string& w : a.words()) {
    const double* va = a.lookup(w);
    const double* vb = b.lookup(w);
    REQUIRE(va != nullptr);
    REQUIRE(vb != nullptr);
    for (int k = 0; k < config.dimension; ++k) CHECK(va[k] == vb[k]);
  }

  EmbeddingConfig other = config;
  other.seed = 43;
  const EmbeddingProvider c = train_embeddings(corpus, other);
  bool any_difference = false;
  for (const std::string& w : a.words()) {
    const double* va = a.lookup(w);
    const double* vc = c.lookup(w);
    for (int k = 0; k < config.dimension; ++k)
      if (va[k] != vc[k]) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("vocabulary respects min_count and lookups of unknowns are null") {
  const std::vector<TokenList> corpus = corpus_from({
      "alpha alpha alpha beta beta gamma",
  });
  EmbeddingConfig config;
  config.dimension = 4;
  config.min_count = 2;
  config.epochs = 1;

  const EmbeddingProvider p = train_embeddings(corpus, config);
  CHECK(p.dimension() == 4);
  CHECK(p.vocab_size() == 2);  // alpha, beta; gamma filtered
  CHECK(p.lookup("alpha") != nullptr);
  CHECK(p.lookup("beta") != nullptr);
  CHECK(p.lookup("gamma") == nullptr);
  CHECK(p.lookup("never-seen") == nullptr);
  // Ordered by descending count then word.
  REQUIRE(p.words().size() == 2);
  CHECK(p.words()[0] == "alpha");
  CHECK(p.words()[1] == "beta");
}

TEST_CASE("average embedding is the mean over in-vocabulary tokens") {
  EmbeddingProvider p(2);
  p.insert("a", {1.0, 0.0});
  p.insert("b", {0.0, 1.0});

  {
    const std::vector<double> avg = average_embedding(tokenize("a b"), p);
    REQUIRE(avg.size() == 2);
    CHECK(avg[0] == doctest::Approx(0.5));
    CHECK(avg[1] == doctest::Approx(0.5));
  }
  {
    EmbeddingProvider q(2);
    q.insert("a", {2.0, 4.0});
    // OOV tokens are skipped entirely, not averaged in as zeros.
    const std::vector<double> avg = average_embedding(tokenize("a zzz a"), q);
    CHECK(avg[0] == doctest::Approx(2.0));
    CHECK(avg[1] == doctest::Approx(4.0));
  }
  {
    const std::vector<double> avg = average_embedding(tokenize("x y z"), p);
    CHECK(avg == std::vector<double>{0.0, 0.0});
  }
  {
    const std::vector<double> avg = average_embedding(tokenize(""), p);
    CHECK(avg == std::vector<double>{0.0, 0.0});
  }
}

TEST_CASE("co-occurrence structure shows up as cosine similarity") {
  // "sun"/"moon" always appear in the same contexts ("bright", "sky");
  // "fish" lives in disjoint contexts. After training, sun should be closer
  // to moon than to fish.
  std::vector<std::string> lines;
  for (int k = 0; k < 60; ++k) {
    lines.push_back("the sun is bright in the sky");
    lines.push_back("the moon is bright in the sky");
    lines.push_back("a fish swims under deep water");
  }
  EmbeddingConfig config;
  config.dimension = 16;
  config.window = 3;
  config.epochs = 8;
  config.min_count = 1;
  config.seed = 7;

  const EmbeddingProvider p = train_embeddings(corpus_from(lines), config);
  const double* sun = p.lookup("sun");
  const double* moon = p.lookup("moon");
  const double* fish = p.lookup("fish");
  REQUIRE(sun != nullptr);
  REQUIRE(moon != nullptr);
  REQUIRE(fish != nullptr);
  CHECK(cosine(sun, moon, 16) > cosine(sun, fish, 16));
}

TEST_CASE("save and load round-trip the full table") {
  EmbeddingProvider p(3);
  p.insert("one", {1.0, -0.5, 0.25});
  p.insert("two", {0.125, 3.0, -2.0});

  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "sdqc_emb_roundtrip.txt";
  p.save(path.string());
  const EmbeddingProvider q = EmbeddingProvider::load(path.string());
  CHECK(q.dimension() == 3);
  CHECK(q.words() == p.words());
  for (const std::string& w : p.words()) {
    const double* vp = p.lookup(w);
    const double* vq = q.lookup(w);
    REQUIRE(vq != nullptr);
    for (int k = 0; k < 3; ++k)
      CHECK(vq[k] == doctest::Approx(vp[k]).epsilon(1e-12));
  }
  std::filesystem::remove(path);

  try {
    EmbeddingProvider::load("/nonexistent/embeddings.txt");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("training rejects degenerate inputs") {
  EmbeddingConfig config;
  config.dimension = 4;
  {
    try {
      train_embeddings({}, config);
      FAIL("expected EmptyCorpus");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyCorpus);
    }
  }
  {
    // A corpus where min_count filters everything away is equally empty.
    EmbeddingConfig strict = config;
    strict.min_count = 100;
    try {
      train_embeddings(corpus_from({"lone words here"}), strict);
      FAIL("expected EmptyCorpus");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyCorpus);
    }
  }
}

TEST_CASE("insert enforces the declared dimension") {
  EmbeddingProvider p(2);
  try {
    p.insert("bad", {1.0, 2.0, 3.0});
    FAIL("expected InconsistentDimension");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentDimension);
  }
}
