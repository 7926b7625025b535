#include <gtest/gtest.h>

#include <fstream>

#include "rb/error.hpp"
#include "rb/io.hpp"
#include "rb/synthetic.hpp"
#include "test_util.hpp"

TEST(Ply, MeshRoundTripBothFormats) {
  testutil::TempDir dir("ply_mesh");
  const auto m = rb::make_cylinder({0.5, 0.5, 0.1}, 0.3123456789, 0.7, 16);
  for (auto format : {rb::PlyFormat::Ascii, rb::PlyFormat::BinaryLittleEndian}) {
    const auto path = dir.path() / "m.ply";
    rb::save_ply(path, m, format);
    EXPECT_EQ(rb::load_ply_mesh(path), m);
  }
}

TEST(Ply, PointsWithDistanceChannel) {
  testutil::TempDir dir("ply_dist");
  rb::PointCloud c;
  c.points = {{0.25, 0.5, 0.75}, {1, 0, 0}};
  c.scalars = {0.125, 2.0};
  for (auto format : {rb::PlyFormat::Ascii, rb::PlyFormat::BinaryLittleEndian}) {
    const auto path = dir.path() / "p.ply";
    rb::save_ply(path, c, format);
    const auto back = rb::load_ply_points(path);
    EXPECT_EQ(back.cloud.points, c.points);
    EXPECT_EQ(back.cloud.scalars, c.scalars);
    EXPECT_TRUE(back.colors.empty());
  }
}

TEST(Ply, PointsWithColors) {
  testutil::TempDir dir("ply_rgb");
  rb::PointCloud c;
  c.points = {{0.5, 0.5, 0.5}, {0, 0, 1}};
  const std::vector<rb::Rgb> colors = {{255, 221, 0}, {38, 38, 140}};
  for (auto format : {rb::PlyFormat::Ascii, rb::PlyFormat::BinaryLittleEndian}) {
    const auto path = dir.path() / "c.ply";
    rb::save_ply(path, c, format, &colors);
    const auto back = rb::load_ply_points(path);
    EXPECT_EQ(back.cloud.points, c.points);
    EXPECT_EQ(back.colors, colors);
  }
  std::vector<rb::Rgb> short_colors = {{1, 2, 3}};
  EXPECT_THROW(rb::save_ply(dir.path() / "x.ply", c, rb::PlyFormat::Ascii, &short_colors), rb::Error);
}

TEST(Ply, ReadsForeignAsciiWithQuadsAndExtraProperties) {
  testutil::TempDir dir("ply_foreign");
  const auto path = dir.path() / "quad.ply";
  std::ofstream(path) << "ply\nformat ascii 1.0\ncomment made elsewhere\n"
                         "element vertex 4\nproperty double x\nproperty double y\nproperty double z\n"
                         "property uchar intensity\n"
                         "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
                         "0 0 0 9\n1 0 0 9\n1 1 0 9\n0 1 0 9\n4 0 1 2 3\n";
  const auto m = rb::load_ply_mesh(path);
  ASSERT_EQ(m.vertices.size(), 4u);
  ASSERT_EQ(m.triangles.size(), 2u);
  EXPECT_EQ(m.triangles[0], (rb::Triangle{0, 1, 2}));
  EXPECT_EQ(m.triangles[1], (rb::Triangle{0, 2, 3}));
}

TEST(Ply, RejectsMalformedFiles) {
  testutil::TempDir dir("ply_bad");
  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir.path() / name, std::ios::binary) << body;
    return dir.path() / name;
  };
  EXPECT_THROW(rb::load_ply_mesh(write("a.ply", "not a ply\n")), rb::Error);
  EXPECT_THROW(rb::load_ply_mesh(write("b.ply", "ply\nformat binary_big_endian 1.0\nend_header\n")), rb::Error);
  EXPECT_THROW(rb::load_ply_mesh(write("c.ply", "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\n"
                                                "property float y\nproperty float z\nend_header\n0 0 0\n")),
               rb::Error);
  EXPECT_THROW(rb::load_ply_mesh(write("d.ply", "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                                                "property float y\nproperty float z\nelement face 1\n"
                                                "property list uchar int vertex_indices\nend_header\n"
                                                "0 0 0\n3 0 1 2\n")),
               rb::Error);
  EXPECT_THROW(rb::load_ply_mesh(dir.path() / "missing.ply"), rb::Error);
}
