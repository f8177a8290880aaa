#include "getme/mesh_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace getme {

namespace {

constexpr std::array<int, 6> kWedgePermutation = {0, 2, 1, 3, 5, 4};

class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) : in_(in) {}

  int line() const { return line_; }

  std::string nextLine() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    ++line_;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  bool next(std::string& token) {
    while (pos_ >= current_.size() || current_.find_first_not_of(" \t", pos_) == std::string::npos) {
      if (!std::getline(in_, current_)) return false;
      ++line_;
      if (!current_.empty() && current_.back() == '\r') current_.pop_back();
      pos_ = 0;
    }
    const auto start = current_.find_first_not_of(" \t", pos_);
    auto end = current_.find_first_of(" \t", start);
    if (end == std::string::npos) end = current_.size();
    token = current_.substr(start, end - start);
    pos_ = end;
    return true;
  }

  std::string expectToken(const char* what) {
    std::string t;
    if (!next(t)) fail(std::string("expected ") + what);
    return t;
  }

  template <typename T>
  T expectNumber(const char* what) {
    const std::string t = expectToken(what);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail(std::string("invalid ") + what + " '" + t + "'");
    }
    return value;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::MalformedFile, "line " + std::to_string(line_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::string current_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

ElementKind kindForCellType(int code, const Tokenizer& tok) {
  switch (code) {
    case 10: return ElementKind::Tetra;
    case 12: return ElementKind::Hexa;
    case 13: return ElementKind::Prism;
    case 14: return ElementKind::Pyramid;
    default:
      throw Error(ErrorCode::UnsupportedCellType,
                  "line " + std::to_string(tok.line()) + ": cell type " + std::to_string(code));
  }
}

std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int vtkCellType(ElementKind kind) {
  switch (kind) {
    case ElementKind::Tetra: return 10;
    case ElementKind::Hexa: return 12;
    case ElementKind::Prism: return 13;
    case ElementKind::Pyramid: return 14;
  }
  return 0;
}

Mesh readMesh(std::istream& in) {
  Tokenizer tok(in);
  if (tok.nextLine().rfind("# vtk DataFile Version", 0) != 0) tok.fail("missing vtk header");
  tok.nextLine();  // title
  std::string format = tok.expectToken("format");
  if (format != "ASCII") tok.fail("only ASCII files are supported");
  if (tok.expectToken("DATASET") != "DATASET" || tok.expectToken("dataset type") != "UNSTRUCTURED_GRID") {
    tok.fail("expected DATASET UNSTRUCTURED_GRID");
  }

  Coords points;
  std::vector<std::vector<Index>> cells;
  std::vector<int> types;
  bool havePoints = false, haveCells = false, haveTypes = false;
  std::string keyword;
  while (tok.next(keyword)) {
    if (keyword == "POINTS") {
      const long n = tok.expectNumber<long>("point count");
      const std::string type = tok.expectToken("point type");
      if (type != "float" && type != "double") tok.fail("unsupported point type " + type);
      if (n < 0) tok.fail("negative point count");
      points.resize(3, n);
      for (long i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) points(c, i) = tok.expectNumber<double>("coordinate");
      havePoints = true;
    } else if (keyword == "CELLS") {
      const long m = tok.expectNumber<long>("cell count");
      tok.expectNumber<long>("cell list size");
      if (m < 0) tok.fail("negative cell count");
      cells.resize(m);
      for (long i = 0; i < m; ++i) {
        const long k = tok.expectNumber<long>("cell size");
        if (k <= 0) tok.fail("invalid cell size");
        for (long j = 0; j < k; ++j) cells[i].push_back(tok.expectNumber<long>("cell index"));
      }
      haveCells = true;
    } else if (keyword == "CELL_TYPES") {
      const long m = tok.expectNumber<long>("cell type count");
      if (m < 0) tok.fail("negative cell type count");
      types.resize(m);
      for (long i = 0; i < m; ++i) types[i] = tok.expectNumber<int>("cell type");
      haveTypes = true;
    } else if (keyword == "POINT_DATA" || keyword == "CELL_DATA") {
      break;  // attributes are not read back
    } else {
      tok.fail("unexpected keyword '" + keyword + "'");
    }
  }
  if (!havePoints || !haveCells || !haveTypes) tok.fail("POINTS, CELLS and CELL_TYPES are required");
  if (types.size() != cells.size()) tok.fail("CELLS and CELL_TYPES counts differ");

  std::vector<Element> elements;
  elements.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const ElementKind kind = kindForCellType(types[i], tok);
    if (static_cast<int>(cells[i].size()) != vertexCount(kind)) {
      tok.fail("cell " + std::to_string(i) + " has the wrong vertex count");
    }
    Element e{kind, cells[i]};
    if (kind == ElementKind::Prism) {
      for (int j = 0; j < 6; ++j) e.vertices[j] = cells[i][kWedgePermutation[j]];
    }
    elements.push_back(std::move(e));
  }
  return makeMesh(std::move(points), std::move(elements));
}

Mesh readMesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return readMesh(in);
}

void writeMesh(const Mesh& mesh, const Coords& coords, std::ostream& out,
               const MeshAttributes& attributes) {
  const Index n = coords.cols();
  const Index m = mesh.elementCount();
  std::ostringstream s;
  s << "# vtk DataFile Version 3.0\n"
    << "getme mesh\n"
    << "ASCII\n"
    << "DATASET UNSTRUCTURED_GRID\n"
    << "POINTS " << n << " double\n";
  for (Index i = 0; i < n; ++i) {
    s << formatDouble(coords(0, i)) << ' ' << formatDouble(coords(1, i)) << ' '
      << formatDouble(coords(2, i)) << '\n';
  }
  std::size_t listSize = 0;
  for (const Element& e : mesh.elements) listSize += e.vertices.size() + 1;
  s << "CELLS " << m << ' ' << listSize << '\n';
  for (const Element& e : mesh.elements) {
    s << e.vertices.size();
    for (std::size_t j = 0; j < e.vertices.size(); ++j) {
      const std::size_t src = e.kind == ElementKind::Prism ? kWedgePermutation[j] : j;
      s << ' ' << e.vertices[src];
    }
    s << '\n';
  }
  s << "CELL_TYPES " << m << '\n';
  for (const Element& e : mesh.elements) s << vtkCellType(e.kind) << '\n';

  if (attributes.boundaryFlag || !attributes.pointScalars.empty()) {
    s << "POINT_DATA " << n << '\n';
    if (attributes.boundaryFlag) {
      s << "SCALARS boundary int 1\nLOOKUP_TABLE default\n";
      for (Index i = 0; i < n; ++i) {
        s << (static_cast<std::size_t>(i) < mesh.boundary.size() && mesh.boundary[i] ? 1 : 0) << '\n';
      }
    }
    for (const auto& [name, values] : attributes.pointScalars) {
      if (static_cast<Index>(values.size()) != n) {
        throw Error(ErrorCode::InvalidSpec, "point attribute '" + name + "' has the wrong length");
      }
      s << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) s << formatDouble(v) << '\n';
    }
  }
  if (!attributes.cellScalars.empty()) {
    s << "CELL_DATA " << m << '\n';
    for (const auto& [name, values] : attributes.cellScalars) {
      if (static_cast<Index>(values.size()) != m) {
        throw Error(ErrorCode::InvalidSpec, "cell attribute '" + name + "' has the wrong length");
      }
      s << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) s << formatDouble(v) << '\n';
    }
  }
  out << s.str();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed");
}

void writeMesh(const Mesh& mesh, const Coords& coords, const std::filesystem::path& path,
               const MeshAttributes& attributes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  writeMesh(mesh, coords, out, attributes);
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace getme
