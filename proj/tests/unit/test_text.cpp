/*
 * Copyright 2026 The Hotspot Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hotspot/error.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/text.hpp"

using namespace hotspot;

TEST_SUITE("text") {

TEST_CASE("doubles round trip through the shortest decimal") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(NAN).empty());
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform(-12, 12));
    const auto back = parse_double(format_double(x));
    REQUIRE(back);
    CHECK(*back == x);
  }
}

TEST_CASE("number parsing rejects junk") {
  CHECK_FALSE(parse_double("1.5x"));
  CHECK_FALSE(parse_double(""));
  CHECK(parse_double(" 2.5 ") == 2.5);
  CHECK(parse_int("-12") == -12);
  CHECK_FALSE(parse_uint("-1"));
  CHECK(parse_uint("18446744073709551615") == 18446744073709551615ULL);
}

TEST_CASE("rfc3339 hours") {
  const auto h = parse_rfc3339_hour("2012-12-09T13:00:00Z");
  REQUIRE(h);
  CHECK(format_rfc3339(*h) == "2012-12-09T13:00:00Z");
  CHECK(parse_rfc3339_hour("2012-12-09T13:00:00+00:00") == h);
  CHECK_FALSE(parse_rfc3339_hour("2012-12-09T13:30:00Z"));
  CHECK_FALSE(parse_rfc3339_hour("2012-02-30T00:00:00Z"));
  CHECK_FALSE(parse_rfc3339_hour("2012-12-09 13:00:00"));
}

TEST_CASE("csv reader handles quotes, CRLF and blank lines") {
  fixture::TempDir dir("csv");
  const auto path =
      fixture::write(dir, "a.csv", "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\nplain,\"multi\nline\"\n");
  CsvReader r(path);
  std::vector<std::string> f;
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"a", "b"});
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"x,1", "say \"hi\""});
  CHECK(r.line() == 2);
  REQUIRE(r.next(f));
  CHECK(f == std::vector<std::string>{"plain", "multi\nline"});
  CHECK(r.line() == 4);
  CHECK_FALSE(r.next(f));

  std::string out;
  append_csv_field(out, "a,\"b\"");
  CHECK(out == "\"a,\"\"b\"\"\"");
}

TEST_CASE("missing columns are schema errors") {
  try {
    require_columns({"x", "y"}, {"x", "z"}, "f.csv");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSchema);
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("io errors") {
  try {
    read_file("/nonexistent/dir/file");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

}
