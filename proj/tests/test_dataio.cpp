#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "dispvo/dataset.hpp"
#include "dispvo/disparity.hpp"
#include "dispvo/errors.hpp"
#include "dispvo/kitti_io.hpp"
#include "test_support.hpp"

using namespace dispvo;
using dispvo::testing::Sampler;

namespace {

std::vector<Pose> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_kitti_poses(in);
}

int parse_error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

std::vector<DisparityMap> numbered_frames(int n, int width = 4, int height = 2) {
    std::vector<DisparityMap> frames;
    for (int i = 0; i < n; ++i) frames.push_back(DisparityMap::filled(width, height, 0.01f * i, i));
    return frames;
}

std::vector<Pose> forward_poses(int n) {
    std::vector<Pose> poses(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) poses[i].position = Vec3(0, 0, i);
    return poses;
}

}  // namespace

TEST(KittiPoses, ParsesIdentityAndSkipsBlankLines) {
    const auto poses = parse("1 0 0 0 0 1 0 0 0 0 1 0\n\n1 0 0 1.5 0 1 0 -2 0 0 1 3e2\n");
    ASSERT_EQ(poses.size(), 2u);
    EXPECT_EQ(poses[0].rotation.matrix(), Mat3::Identity());
    EXPECT_EQ(poses[1].position, Vec3(1.5, -2, 300));
}

TEST(KittiPoses, ReportsOffendingLine) {
    EXPECT_EQ(parse_error_line("1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 0 0 1 0 0 0 0 1\n"), 2);
    EXPECT_EQ(parse_error_line("1 0 0 0 0 1 0 0 0 0 1 0 7\n"), 1);
    EXPECT_EQ(parse_error_line("1 0 0 0 0 1 0 0 0 0 1 0\n\n1 0 0 x 0 1 0 0 0 0 1 0\n"), 3);
}

TEST(KittiPoses, RejectsNonRotationBlocks) {
    EXPECT_THROW(parse("2 0 0 0 0 1 0 0 0 0 1 0\n"), ValidationError);
    EXPECT_THROW(parse("1 0 0 0 0 1 0 0 0 0 -1 0\n"), ValidationError);
    // Print rounding in real files is re-projected silently.
    const auto poses = parse("1.0000001 0 0 0 0 1 0 0 0 0 0.9999999 0\n");
    EXPECT_LT(orthogonality_defect(poses[0].rotation.matrix()), 1e-12);
}

TEST(KittiPoses, IdentityFormatsCompactly) {
    EXPECT_EQ(format_kitti_pose(Pose{}), "1 0 0 0 0 1 0 0 0 0 1 0");
    EXPECT_EQ(format_real(-0.0), "0");
    EXPECT_EQ(format_real(0.1), "0.1");
}

TEST(KittiPoses, WriteReadRoundTripIsExact) {
    Sampler s(21);
    std::vector<Pose> poses;
    for (int i = 0; i < 100; ++i) poses.push_back(s.pose(1e3));
    std::ostringstream out;
    write_kitti_poses(out, poses);
    const auto back = parse(out.str());
    ASSERT_EQ(back.size(), poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) {
        EXPECT_EQ(back[i].position, poses[i].position);
        // Valid rotations survive the projection unchanged to round-off.
        EXPECT_LT((back[i].rotation.matrix() - poses[i].rotation.matrix()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Motions, WriteReadRoundTrip) {
    Sampler s(22);
    std::vector<RelativeMotion> motions;
    for (int i = 0; i < 20; ++i) motions.push_back(RelativeMotion::from_rotation(s.rotation(), s.vec(3)));
    std::ostringstream out;
    write_motions(out, motions);
    std::istringstream in(out.str());
    const auto back = parse_motions(in);
    ASSERT_EQ(back.size(), motions.size());
    for (std::size_t i = 0; i < motions.size(); ++i) {
        EXPECT_EQ(back[i].translation, motions[i].translation);
        EXPECT_LT((back[i].euler.as_vector() - motions[i].euler.as_vector()).norm(), 1e-12);
    }
}

TEST(Disparity, NativeRoundTripIsBitExact) {
    DisparityMap m = DisparityMap::filled(7, 3, 0.0f);
    for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = static_cast<float>(i) / 20.0f;
    m.values[5] = std::numeric_limits<float>::denorm_min();
    std::stringstream io;
    write_disparity(io, m);
    const DisparityMap back = read_disparity(io);
    EXPECT_EQ(back, m);
}

TEST(Disparity, NativeFormatErrors) {
    auto read = [](const std::string& bytes) {
        std::istringstream in(bytes);
        return read_disparity(in);
    };
    EXPECT_THROW(read("XXXX"), FormatError);
    std::stringstream io;
    write_disparity(io, DisparityMap::filled(2, 2, 0.5f));
    const std::string good = io.str();
    EXPECT_THROW(read(good.substr(0, good.size() - 1)), FormatError);
    EXPECT_THROW(read(good + "z"), FormatError);
    std::string nan_bytes = good;
    const float nan = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(nan_bytes.data() + 12, &nan, sizeof nan);
    EXPECT_THROW(read(nan_bytes), FormatError);
}

TEST(Disparity, OutOfRangeValuesAreClamped) {
    // Hand-built container, since the writer refuses out-of-range maps.
    std::string bytes = "DSP1";
    const std::uint32_t dims[2] = {2, 1};
    const float values[2] = {-0.5f, 3.0f};
    bytes.append(reinterpret_cast<const char*>(dims), sizeof dims);
    bytes.append(reinterpret_cast<const char*>(values), sizeof values);
    std::istringstream io(bytes);
    const DisparityMap back = read_disparity(io);
    EXPECT_EQ(back.values[0], 0.0f);
    EXPECT_EQ(back.values[1], 1.0f);
}

TEST(Disparity, ValidateCatchesBadMaps) {
    DisparityMap m = DisparityMap::filled(2, 2, 0.5f);
    EXPECT_NO_THROW(m.validate());
    m.values.pop_back();
    EXPECT_THROW(m.validate(), ValidationError);
    DisparityMap empty;
    EXPECT_THROW(empty.validate(), ValidationError);
}

TEST(Pgm, SixteenBitMaxMapsToOne) {
    std::string bytes = "P5\n# comment\n3 1\n65535\n";
    bytes += std::string("\xff\xff\x00\x00\x80\x00", 6);
    std::istringstream in(bytes);
    const DisparityMap m = read_pgm(in, 4);
    EXPECT_EQ(m.width, 3);
    EXPECT_EQ(m.height, 1);
    EXPECT_EQ(m.frame_index, 4);
    EXPECT_EQ(m.values[0], 1.0f);
    EXPECT_EQ(m.values[1], 0.0f);
    EXPECT_FLOAT_EQ(m.values[2], 32768.0f / 65535.0f);
}

TEST(Pgm, EightBitAndErrors) {
    std::string bytes = "P5 2 1 255 ";
    bytes += std::string("\xff\x33", 2);
    std::istringstream in(bytes);
    const DisparityMap m = read_pgm(in);
    EXPECT_EQ(m.values[0], 1.0f);
    EXPECT_FLOAT_EQ(m.values[1], 0.2f);

    std::istringstream ascii("P2 2 1 255 1 2");
    EXPECT_THROW(read_pgm(ascii), FormatError);
    std::istringstream short_data("P5 2 2 255 ab");
    EXPECT_THROW(read_pgm(short_data), FormatError);
}

TEST(Disparity, FileDispatchOnMagic) {
    const auto dir = std::filesystem::temp_directory_path() / "dispvo_test_dataio";
    std::filesystem::create_directories(dir);
    const DisparityMap m = DisparityMap::filled(3, 2, 0.25f);
    save_disparity(m, dir / "a.disp");
    EXPECT_EQ(load_disparity(dir / "a.disp"), m);
    {
        std::ofstream pgm(dir / "b.pgm", std::ios::binary);
        pgm << "P5\n1 1\n255\n" << '\xff';
    }
    EXPECT_EQ(load_disparity(dir / "b.pgm").values[0], 1.0f);
    EXPECT_THROW(load_disparity(dir / "missing.disp"), InputError);
    std::filesystem::remove_all(dir);
}

TEST(Triples, SlidingWindowCount) {
    for (int n : {3, 4, 10, 100}) {
        const auto triples = make_triples(numbered_frames(n), forward_poses(n));
        ASSERT_EQ(triples.size(), static_cast<std::size_t>(n - 2));
        EXPECT_EQ(triples.back().frames[2].frame_index, n - 1);
    }
}

TEST(Triples, InputErrors) {
    EXPECT_THROW(make_triples(numbered_frames(2), forward_poses(2)), InputError);
    EXPECT_THROW(make_triples(numbered_frames(5), forward_poses(4)), InputError);
    auto frames = numbered_frames(5);
    frames[3].frame_index = 7;
    EXPECT_THROW(make_triples(frames, forward_poses(5)), InputError);
}

TEST(Pairs, SkipOrderingAddsGapTwoPair) {
    const auto triples = make_triples(numbered_frames(3), forward_poses(3));
    const auto with = expand_pairs(triples[0], true);
    const auto without = expand_pairs(triples[0], false);
    ASSERT_EQ(with.size(), 3u);
    ASSERT_EQ(without.size(), 2u);
    EXPECT_EQ(with[2].gap, 2);
    EXPECT_EQ(with[2].earlier.frame_index, 0);
    EXPECT_EQ(with[2].later.frame_index, 2);
    EXPECT_EQ(with[2].target.translation, Vec3(0, 0, 2));
    for (const auto& p : without) EXPECT_EQ(p.gap, 1);
}

TEST(Pairs, CountsScaleWithSequenceLength) {
    for (int n : {3, 10, 100}) {
        const auto triples = make_triples(numbered_frames(n), forward_poses(n));
        for (bool so : {true, false}) {
            std::size_t total = 0;
            for (const auto& t : triples) total += expand_pairs(t, so).size();
            EXPECT_EQ(total, static_cast<std::size_t>((so ? 3 : 2) * (n - 2)));
        }
    }
}

TEST(Split, DefaultIsDisjoint) {
    const auto split = SequenceSplit::kitti_default();
    EXPECT_EQ(split.train_ids.size(), 8u);
    EXPECT_EQ(split.test_ids.size(), 3u);
    EXPECT_NO_THROW(split.validate());
    SequenceSplit bad{{"00", "01"}, {"01"}};
    EXPECT_THROW(bad.validate(), InputError);
}
