/*
 * volseg: 3D volume resampling and segmentation evaluation toolkit
 *
 * Copyright 2026 The volseg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <random>

#include "volseg/metaimage.hpp"
#include "volseg/volume.hpp"
#include "test_support.hpp"

using namespace volseg;
using namespace testsup;

TEST_SUITE_BEGIN("volume");

TEST_CASE("voxel_to_world follows the voxel-center convention") {
  Volume3 a({4, 4, 4}, {1, 1, 1}, {0, 0, 0});
  CHECK(voxel_to_world(a, 0, 0, 0) == Vec3{0, 0, 0});

  Volume3 b({4, 4, 4}, {0.625, 0.625, 3.6}, {10, 0, 0});
  const Vec3 w = voxel_to_world(b, 2, 0, 1);
  CHECK(w.x == doctest::Approx(11.25).epsilon(1e-12));
  CHECK(w.y == doctest::Approx(0.0));
  CHECK(w.z == doctest::Approx(3.6).epsilon(1e-12));

  Volume3 c({4, 4, 4}, {2, 2, 2}, {0, 0, 0});
  CHECK(voxel_to_world(c, 1, 1, 1) == Vec3{2, 2, 2});

  CHECK_THROWS_AS(voxel_to_world(a, 4, 0, 0), GeometryError);
  CHECK_THROWS_AS(voxel_to_world(a, 0, -1, 0), GeometryError);
}

TEST_CASE("world_to_voxel inverts voxel_to_world") {
  Volume3 v({8, 8, 8}, {0.5, 0.5, 0.5}, {0, 0, 0});
  const Vec3 f = world_to_voxel(v, {1, 1, 1});
  CHECK(f.x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.y == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.z == doctest::Approx(2.0).epsilon(1e-12));

  Volume3 o({8, 8, 8}, {1, 1, 1}, {5, 5, 5});
  CHECK(world_to_voxel(o, {5, 5, 5}) == Vec3{0, 0, 0});

  // Round trip within 1e-9 on randomized geometry.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sp(0.1, 4.0), og(-50.0, 50.0);
  for (int it = 0; it < 200; ++it) {
    Volume3 g({11, 9, 7}, {sp(rng), sp(rng), sp(rng)}, {og(rng), og(rng), og(rng)});
    const int i = int(rng() % 11), j = int(rng() % 9), k = int(rng() % 7);
    const Vec3 f2 = world_to_voxel(g, voxel_to_world(g, i, j, k));
    CHECK(std::abs(f2.x - i) < 1e-9);
    CHECK(std::abs(f2.y - j) < 1e-9);
    CHECK(std::abs(f2.z - k) < 1e-9);
  }
}

TEST_CASE("binarize thresholds with the >= tie rule") {
  Volume3 v({2, 2, 2}, {1, 1, 1});
  std::fill(v.voxels.begin(), v.voxels.end(), 0.7f);
  Mask3 ones = binarize(v, 0.5);
  Mask3 zeros = binarize(v, 0.9);
  for (auto m : ones.voxels) CHECK(m == 1);
  for (auto m : zeros.voxels) CHECK(m == 0);

  v.voxels[3] = 0.9f;  // exactly at threshold
  CHECK(binarize(v, 0.9).voxels[3] == 1);
}

TEST_CASE("binarize flips exactly the voxel crossed over the threshold") {
  Volume3 v = random_volume({6, 5, 4}, {1, 1, 1}, {}, 11);
  const Mask3 base = binarize(v, 0.5);
  for (std::size_t pick : {std::size_t(0), std::size_t(37), v.voxels.size() - 1}) {
    Volume3 w = v;
    w.voxels[pick] = w.voxels[pick] >= 0.5f ? 0.1f : 0.9f;
    const Mask3 flipped = binarize(w, 0.5);
    for (std::size_t i = 0; i < base.voxels.size(); ++i) {
      if (i == pick) {
        CHECK(flipped.voxels[i] != base.voxels[i]);
      } else {
        CHECK(flipped.voxels[i] == base.voxels[i]);
      }
    }
  }
}

TEST_CASE("invalid geometry is rejected") {
  CHECK_THROWS_AS(Volume3({0, 4, 4}, {1, 1, 1}), GeometryError);
  CHECK_THROWS_AS(Volume3({4, 4, 4}, {0.0, 1, 1}), GeometryError);
  CHECK_THROWS_AS(Volume3({4, 4, 4}, {-1.0, 1, 1}), GeometryError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("metaimage");

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("reads a hand-written zero volume") {
  const std::string dir = fresh_dir("mhd_zero");
  write_text(dir + "/zero.mhd",
             "ObjectType = Image\n"
             "NDims = 3\n"
             "DimSize = 4 4 2\n"
             "ElementType = MET_UCHAR\n"
             "ElementDataFile = zero.raw\n");
  std::ofstream raw(dir + "/zero.raw", std::ios::binary);
  const std::vector<char> zeros(32, 0);
  raw.write(zeros.data(), 32);
  raw.close();

  const Volume3 v = read_metaimage(dir + "/zero.mhd");
  CHECK(v.dims == Dims3{4, 4, 2});
  CHECK(v.spacing == Spacing3{1, 1, 1});  // ElementSpacing defaults
  CHECK(v.origin == Vec3{0, 0, 0});
  for (float x : v.voxels) CHECK(x == 0.0f);
}

TEST_CASE("write/read round trip preserves geometry and voxels") {
  const std::string dir = fresh_dir("mhd_roundtrip");

  SUBCASE("float volume") {
    Volume3 v = random_volume({7, 6, 5}, {0.625, 0.625, 3.6}, {1.5, -2.0, 7.25}, 3, -3.0f, 9.0f);
    write_metaimage(v, dir + "/f.mhd", ElementType::Float);
    ElementType t;
    const Volume3 r = read_metaimage(dir + "/f.mhd", &t);
    CHECK(t == ElementType::Float);
    CHECK(r.dims == v.dims);
    CHECK(std::abs(r.spacing.x - v.spacing.x) < 1e-6);
    CHECK(std::abs(r.spacing.z - v.spacing.z) < 1e-6);
    CHECK(r.origin == v.origin);
    CHECK(r.voxels == v.voxels);
  }

  SUBCASE("integer types are exact") {
    std::mt19937_64 rng(4);
    Volume3 v({5, 4, 3}, {1, 2, 3}, {0, 0, 0});
    for (float& x : v.voxels) x = float(int(rng() % 200) - 50);
    for (ElementType t : {ElementType::Short, ElementType::UShort, ElementType::UChar}) {
      Volume3 w = v;
      if (t != ElementType::Short) {
        for (float& x : w.voxels) x = std::abs(x);  // unsigned-representable
      }
      const std::string path = dir + "/i" + std::to_string(int(t)) + ".mhd";
      write_metaimage(w, path, t);
      ElementType seen;
      const Volume3 r = read_metaimage(path, &seen);
      CHECK(seen == t);
      CHECK(r.voxels == w.voxels);
    }
  }

  SUBCASE("mask round trip") {
    Mask3 m = random_mask({6, 6, 4}, 9);
    write_metaimage(m, dir + "/m.mhd");
    const Mask3 r = read_metaimage_mask(dir + "/m.mhd");
    CHECK(r.voxels == m.voxels);
  }
}

TEST_CASE("header carries the exact proposed spacing") {
  const std::string dir = fresh_dir("mhd_header");
  Mask3 m({2, 2, 2}, {0.3125, 0.3125, 1.5});
  write_metaimage(m, dir + "/p.mhd");
  const std::string header = slurp(dir + "/p.mhd");
  CHECK(header.find("ElementSpacing = 0.3125 0.3125 1.5") != std::string::npos);
  CHECK(header.find("ObjectType = Image") != std::string::npos);
  CHECK(header.find("BinaryDataByteOrderMSB = False") != std::string::npos);
  // ElementDataFile must be the final key
  const auto pos = header.rfind("ElementDataFile");
  CHECK(header.find('=', pos) != std::string::npos);
}

TEST_CASE("single foreground voxel writes exactly one 0x01 byte") {
  const std::string dir = fresh_dir("mhd_one");
  Mask3 m({1, 1, 1}, {1, 1, 1});
  m.voxels[0] = 1;
  write_metaimage(m, dir + "/one.mhd");
  const std::string raw = slurp(dir + "/one.raw");
  REQUIRE(raw.size() == 1);
  CHECK(raw[0] == 0x01);
}

TEST_CASE("error paths name the problem") {
  const std::string dir = fresh_dir("mhd_errors");
  const std::vector<char> bytes(32, 0);

  SUBCASE("missing mandatory key") {
    write_text(dir + "/a.mhd", "NDims = 3\nDimSize = 4 4 2\nElementDataFile = a.raw\n");
    try {
      read_metaimage(dir + "/a.mhd");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("ElementType") != std::string::npos);
    }
  }

  SUBCASE("unsupported rank") {
    write_text(dir + "/b.mhd",
               "NDims = 2\nDimSize = 4 4\nElementType = MET_UCHAR\nElementDataFile = b.raw\n");
    CHECK_THROWS_AS(read_metaimage(dir + "/b.mhd"), ParseError);
  }

  SUBCASE("truncated raw payload") {
    write_text(dir + "/c.mhd",
               "NDims = 3\nDimSize = 4 4 2\nElementType = MET_UCHAR\nElementDataFile = c.raw\n");
    std::ofstream raw(dir + "/c.raw", std::ios::binary);
    raw.write(bytes.data(), 17);
    raw.close();
    try {
      read_metaimage(dir + "/c.mhd");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("32") != std::string::npos);
      CHECK(std::string(e.what()).find("17") != std::string::npos);
    }
  }

  SUBCASE("orientation must be identity") {
    write_text(dir + "/d.mhd",
               "NDims = 3\nDimSize = 4 4 2\nElementType = MET_UCHAR\n"
               "TransformMatrix = 0 1 0 -1 0 0 0 0 1\nElementDataFile = d.raw\n");
    std::ofstream raw(dir + "/d.raw", std::ios::binary);
    raw.write(bytes.data(), 32);
    raw.close();
    CHECK_THROWS_AS(read_metaimage(dir + "/d.mhd"), GeometryError);

    write_text(dir + "/e.mhd",
               "NDims = 3\nDimSize = 4 4 2\nElementType = MET_UCHAR\n"
               "TransformMatrix = 1 0 0 0 1 0 0 0 1\nElementDataFile = e.raw\n");
    std::ofstream raw2(dir + "/e.raw", std::ios::binary);
    raw2.write(bytes.data(), 32);
    raw2.close();
    CHECK_NOTHROW(read_metaimage(dir + "/e.mhd"));
  }

  SUBCASE("data file must be same-directory") {
    write_text(dir + "/f.mhd",
               "NDims = 3\nDimSize = 4 4 2\nElementType = MET_UCHAR\n"
               "ElementDataFile = ../f.raw\n");
    CHECK_THROWS_AS(read_metaimage(dir + "/f.mhd"), ParseError);
    write_text(dir + "/g.mhd",
               "NDims = 3\nDimSize = 4 4 2\nElementType = MET_UCHAR\n"
               "ElementDataFile = LOCAL\n");
    CHECK_THROWS_AS(read_metaimage(dir + "/g.mhd"), ParseError);
  }

  SUBCASE("missing file is an IoError") {
    CHECK_THROWS_AS(read_metaimage(dir + "/nothere.mhd"), IoError);
  }

  SUBCASE("out-of-range integer write is a representation error") {
    Volume3 v({2, 2, 2}, {1, 1, 1});
    std::fill(v.voxels.begin(), v.voxels.end(), 300.0f);
    CHECK_THROWS_AS(write_metaimage(v, dir + "/h.mhd", ElementType::UChar), DataError);
  }
}

TEST_CASE("big-endian payloads are byte-swapped") {
  const std::string dir = fresh_dir("mhd_msb");
  write_text(dir + "/m.mhd",
             "NDims = 3\nDimSize = 2 1 1\nElementType = MET_SHORT\n"
             "BinaryDataByteOrderMSB = True\nElementDataFile = m.raw\n");
  // values 258 (0x0102) and -2 (0xFFFE), big-endian
  const unsigned char payload[4] = {0x01, 0x02, 0xFF, 0xFE};
  std::ofstream raw(dir + "/m.raw", std::ios::binary);
  raw.write(reinterpret_cast<const char*>(payload), 4);
  raw.close();
  const Volume3 v = read_metaimage(dir + "/m.mhd");
  CHECK(v.voxels[0] == 258.0f);
  CHECK(v.voxels[1] == -2.0f);
}

TEST_SUITE_END();
