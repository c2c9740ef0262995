#include <doctest.h>

#include <sstream>

#include "cooccur/errors.hpp"
#include "cooccur/stub.hpp"

using namespace cooccur;

TEST_CASE("stub answers only recorded queries") {
  std::istringstream in(R"x({"(cat AND dog)": 7, "cat": 12})x");
  StubHitSource stub = StubHitSource::from_json(in);
  CHECK(stub.hits(*make_and(make_term("cat"), make_term("dog"))) == 7);
  CHECK(stub.hits(*make_term("cat")) == 12);
  CHECK_THROWS_WITH_AS(stub.hits(*make_term("dog")),
                       doctest::Contains("no recorded count"), Error);
}

TEST_CASE("stub total_docs comes from the reserved key") {
  std::istringstream in(R"({"cat": 3, "__total_docs__": 350000000})");
  StubHitSource stub = StubHitSource::from_json(in);
  CHECK(stub.total_docs() == 350000000);

  std::istringstream without(R"({"cat": 3})");
  StubHitSource bare = StubHitSource::from_json(without);
  CHECK_THROWS_AS(bare.total_docs(), Error);
}

TEST_CASE("stub rejects malformed files") {
  std::istringstream not_json("][");
  CHECK_THROWS_AS(StubHitSource::from_json(not_json), IoError);

  std::istringstream not_object("[1, 2]");
  CHECK_THROWS_AS(StubHitSource::from_json(not_object), IoError);

  std::istringstream negative(R"({"cat": -4})");
  CHECK_THROWS_AS(StubHitSource::from_json(negative), IoError);

  CHECK_THROWS_AS(StubHitSource::from_file("/no/such/stub.json"), IoError);
}
