#include <doctest.h>

#include <filesystem>

#include "halprobe/util/base64.hpp"
#include "halprobe/util/fs.hpp"
#include "halprobe/util/hash.hpp"
#include "halprobe/util/ratio.hpp"
#include "halprobe/util/rng.hpp"

using namespace halprobe;

TEST_CASE("sha256 matches reference vectors") {
  CHECK(util::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(util::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(util::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("base64 reference vectors") {
  CHECK(util::base64_encode("") == "");
  CHECK(util::base64_encode("f") == "Zg==");
  CHECK(util::base64_encode("fo") == "Zm8=");
  CHECK(util::base64_encode("foo") == "Zm9v");
  CHECK(util::base64_encode("foobar") == "Zm9vYmFy");
}

TEST_CASE("ratio arithmetic stays exact and normalized") {
  util::Ratio half(1, 2);
  util::Ratio third(1, 3);
  auto sum = half + third;
  CHECK(sum.num == 5);
  CHECK(sum.den == 6);
  CHECK((sum / 5) == util::Ratio(1, 6));
  CHECK((half * third) == util::Ratio(1, 6));
  CHECK((half / third) == util::Ratio(3, 2));
  CHECK(util::Ratio(2, 4) == util::Ratio(1, 2));
  CHECK(util::Ratio(-2, -4) == util::Ratio(1, 2));
  CHECK(util::Ratio(2, -4).num == -1);
  CHECK(util::Ratio(1, 3) < util::Ratio(1, 2));
  CHECK_THROWS(util::Ratio(1, 0));
}

TEST_CASE("atomic write leaves no temporary behind") {
  const auto dir = std::filesystem::temp_directory_path() / "halprobe_fs_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  util::atomic_write_file(path, "hello");
  CHECK(util::read_file(path) == "hello");
  util::atomic_write_file(path, "world");
  CHECK(util::read_file(path) == "world");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rng streams are reproducible and bounded") {
  util::Rng a(42);
  util::Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  util::Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto v = c.uniform_int(3, 9);
    CHECK(v >= 3);
    CHECK(v <= 9);
  }
}

TEST_CASE("uniform_int covers the whole range") {
  util::Rng rng(123);
  bool seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 200; ++i) seen[rng.uniform_int(0, 4)] = true;
  for (bool hit : seen) CHECK(hit);
}
