#include <doctest.h>

#include "drawgraph/errors.hpp"
#include "drawgraph/skeleton.hpp"
#include "drawgraph/synth.hpp"
#include "helpers.hpp"

using namespace drawgraph;

namespace {

// Independent transcription of the published two-subiteration thinning
// pseudo-code, used only as a test oracle.
BinaryRaster oracle_zhang_suen(BinaryRaster img) {
    auto P = [&](int x, int y) { return img.ink_at(x, y) ? 1 : 0; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<Px> del;
            for (int y = 0; y < img.height; ++y) {
                for (int x = 0; x < img.width; ++x) {
                    if (!img.at(x, y)) continue;
                    int p2 = P(x, y - 1), p3 = P(x + 1, y - 1), p4 = P(x + 1, y);
                    int p5 = P(x + 1, y + 1), p6 = P(x, y + 1), p7 = P(x - 1, y + 1);
                    int p8 = P(x - 1, y), p9 = P(x - 1, y - 1);
                    int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
                    int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
                    int a = 0;
                    for (int i = 0; i < 8; ++i)
                        if (seq[i] == 0 && seq[i + 1] == 1) ++a;
                    bool cond = b >= 2 && b <= 6 && a == 1;
                    if (pass == 0)
                        cond = cond && p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0;
                    else
                        cond = cond && p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0;
                    if (cond) del.push_back({x, y});
                }
            }
            for (Px p : del) img.set(p.x, p.y, false);
            changed = changed || !del.empty();
        }
    }
    return img;
}

bool has_full_2x2_block(const BinaryRaster& m) {
    for (int y = 0; y + 1 < m.height; ++y)
        for (int x = 0; x + 1 < m.width; ++x)
            if (m.at(x, y) && m.at(x + 1, y) && m.at(x, y + 1) && m.at(x + 1, y + 1)) return true;
    return false;
}

} // namespace

TEST_CASE("skeletonize rejects unknown method identifiers") {
    BinaryRaster m(4, 4);
    CHECK_THROWS_AS(skeletonize(m, "lee"), DataError);
    CHECK_NOTHROW(skeletonize(m, "zhang-suen"));
}

TEST_CASE("skeletonize leaves a single pixel and an empty mask alone") {
    BinaryRaster empty(6, 6);
    CHECK(skeletonize(empty) == empty);
    BinaryRaster dot(6, 6);
    dot.set(3, 3, true);
    CHECK(skeletonize(dot) == dot);
}

TEST_CASE("skeletonize thins a 20x3 bar to a 1 px path, matching the oracle") {
    BinaryRaster bar(26, 9);
    for (int y = 3; y < 6; ++y)
        for (int x = 3; x < 23; ++x) bar.set(x, y, true);

    BinaryRaster ours = skeletonize(bar);
    BinaryRaster oracle = oracle_zhang_suen(bar);
    CHECK(ours == oracle);

    CHECK(!has_full_2x2_block(ours));
    // roughly spans the bar, one pixel per column in the kept range
    int min_x = 99, max_x = -1;
    for (Px p : ours.ink_pixels()) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
    }
    CHECK(max_x - min_x >= 16);
    CHECK(ours.ink_count() <= 22);
    CHECK(count_components8(ours) == 1);
}

TEST_CASE("skeletonize keeps a 2x2 square alive as one component") {
    BinaryRaster sq(6, 6);
    sq.set(2, 2, true);
    sq.set(3, 2, true);
    sq.set(2, 3, true);
    sq.set(3, 3, true);
    BinaryRaster out = skeletonize(sq);
    CHECK(out.ink_count() >= 1);
    CHECK(count_components8(out) == 1);
}

TEST_CASE("skeleton properties hold on seeded synthetic drawings") {
    for (int i = 0; i < 50; ++i) {
        DrawingSpec spec = spec_for_seed(1000 + std::uint64_t(i), 320, 3.0);
        GeneratedDrawing d = generate(spec);
        BinaryRaster mask = binarize(d.drawing, 128);
        BinaryRaster skel = skeletonize(mask);

        CAPTURE(i);
        CHECK(!has_full_2x2_block(skel));
        CHECK(count_components8(skel) == count_components8(mask));
        // idempotence: a second run is a no-op
        CHECK(skeletonize(skel) == skel);
    }
}

TEST_CASE("remove_spurs deletes a short stub and keeps the line") {
    // line y=2 with a 2 px stub rising at x=5
    auto m = testutil::mask_from_art({
        ".....#.....",
        ".....#.....",
        "###########",
    });
    BinaryRaster out = remove_spurs(m, 3);
    auto line = testutil::mask_from_art({
        "...........",
        "...........",
        "###########",
    });
    CHECK(out == line);
}

TEST_CASE("remove_spurs with max_spur_len 0 is the identity") {
    auto m = testutil::mask_from_art({
        ".....#.....",
        ".....#.....",
        "###########",
    });
    CHECK(remove_spurs(m, 0) == m);
}

TEST_CASE("remove_spurs keeps arms longer than the limit") {
    // plus sign with all arms length 10
    BinaryRaster m(23, 23);
    for (int i = 1; i <= 21; ++i) {
        m.set(i, 11, true);
        m.set(11, i, true);
    }
    CHECK(remove_spurs(m, 3) == m);
}

TEST_CASE("remove_spurs keeps isolated short segments") {
    auto m = testutil::mask_from_art({"###"});
    CHECK(remove_spurs(m, 5) == m);
}
