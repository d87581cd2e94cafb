#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drawgraph/graph.hpp"
#include "drawgraph/raster.hpp"

namespace drawgraph {

enum class SemClass { Contour, Text, Dimension };

Rgb sem_class_color(SemClass c);
std::string to_string(SemClass c);

// Index of a semantic class under a labeling scheme.
int sem_class_index(SemClass c, const LabelScheme& scheme);

enum class Template { RectPlate, FlangedDisc, LBracket };
std::string to_string(Template t);
Template template_from_string(const std::string& s);

struct DrawingSpec {
    std::uint64_t seed = 0;
    int canvas = 1024; // long side, px
    Template tmpl = Template::RectPlate;
    int hole_count = 3;
    int dim_count = 3;
    int text_tokens = 3;
    double stroke_width = 3.0;
};

// One stroked/filled shape with its semantic class. Segments and arcs carry
// round caps; triangles are filled.
struct Primitive {
    enum class Shape { Segment, Circle, Arc, Triangle };
    Shape shape = Shape::Segment;
    SemClass cls = SemClass::Contour;
    std::string kind; // outline | hole | centerline | pitch-circle | extension
                      // | dimline | arrowhead | glyph | note
    Vec2 p0, p1, p2;  // segment p0-p1, triangle corners, circle/arc center=p0
    double radius = 0.0;
    double angle0 = 0.0; // arc start angle (radians)
    double sweep = 0.0;  // arc sweep, positive

    bool covers(Vec2 q, double half_width) const;
};

// Ordered primitive list; later primitives paint over earlier ones. Doubles
// as the component manifest of a generated drawing.
struct Scene {
    int width = 0;
    int height = 0;
    double stroke_width = 3.0;
    std::vector<Primitive> prims;

    void add_segment(SemClass cls, std::string kind, Vec2 a, Vec2 b);
    void add_polyline(SemClass cls, std::string kind, const std::vector<Vec2>& pts);
    void add_circle(SemClass cls, std::string kind, Vec2 center, double r);
    void add_arc(SemClass cls, std::string kind, Vec2 center, double r, double a0, double sweep);
    void add_triangle(SemClass cls, std::string kind, Vec2 a, Vec2 b, Vec2 c);

    GrayRaster render_gray() const;
    ColorRaster render_color() const;
    // Topmost primitive class covering the point, painter order.
    std::optional<SemClass> classify_point(Vec2 q) const;
};

// Stroke-font glyphs for dimension text. Keys: '0'-'9', '.', 'R',
// 'd' (diameter symbol), 'p' (plus/minus). Strokes live in a box of
// width 0.62 and height 1.
const std::vector<std::vector<Vec2>>& glyph_strokes(char key);

// Append the glyph polylines of a token at top-left `pos` with glyph height
// `h` to the scene.
void add_text(Scene& scene, const std::string& token, Vec2 pos, double h);
double text_width(const std::string& token, double h);

struct GeneratedDrawing {
    GrayRaster drawing;
    ColorRaster ground_truth;
    Scene scene; // manifest: every primitive with its class
};

// Deterministic for a given spec. Throws DataError("geometry overflow: ...")
// when the requested features cannot be placed on the canvas.
GeneratedDrawing generate(const DrawingSpec& spec);

// Spec derived from a corpus seed (template and counts drawn seeded).
DrawingSpec spec_for_seed(std::uint64_t seed, int canvas = 1024, double stroke_width = 3.0);

struct CorpusEntry {
    DrawingSpec spec;
    std::string draw_file;
    std::string gt_file;
};

// count drawing/GT PNG pairs with seeds base_seed..base_seed+count-1 plus an
// index.json listing them.
std::vector<CorpusEntry> generate_corpus(int count, std::uint64_t base_seed,
                                         const std::string& out_dir, int canvas = 1024,
                                         double stroke_width = 3.0);

std::vector<CorpusEntry> load_corpus_index(const std::string& index_path);

} // namespace drawgraph
