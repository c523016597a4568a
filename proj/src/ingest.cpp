#include "mlspeed/ingest.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace mlspeed {

namespace {

[[noreturn]] void fail(const fs::path& p, const std::string& what) {
    throw std::runtime_error(p.string() + ": " + what);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Shell-style glob match supporting '*' and '?'.
bool glob_match(const std::string& pat, const std::string& name) {
    size_t p = 0, n = 0, star = std::string::npos, mark = 0;
    while (n < name.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*')
        ++p;
    return p == pat.size();
}

int pnm_next_int(std::istream& in, const fs::path& p) {
    // skip whitespace and '#' comments
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
        } else if (!std::isspace(c)) {
            in.unget();
            break;
        }
    }
    int value;
    if (!(in >> value))
        fail(p, "malformed PNM header");
    return value;
}

Frame load_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(path, "cannot open file");
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        fail(path, "not a P5 PGM file");
    const int width = pnm_next_int(in, path);
    const int height = pnm_next_int(in, path);
    const int maxval = pnm_next_int(in, path);
    in.get();  // single whitespace after maxval
    if (width <= 0 || height <= 0)
        fail(path, "invalid PGM dimensions");
    if (maxval <= 0 || maxval > 65535)
        fail(path, "unsupported PGM maxval " + std::to_string(maxval));

    Frame f(height, width);
    const size_t npix = f.size();
    if (maxval < 256) {
        std::vector<uint8_t> buf(npix);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(npix));
        if (!in)
            fail(path, "truncated PGM pixel data");
        for (size_t i = 0; i < npix; ++i)
            f.data()[i] = buf[i] / static_cast<double>(maxval);
    } else {
        std::vector<uint8_t> buf(npix * 2);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(npix * 2));
        if (!in)
            fail(path, "truncated PGM pixel data");
        for (size_t i = 0; i < npix; ++i) {
            // 16-bit PGM samples are big-endian
            const unsigned v = (unsigned(buf[2 * i]) << 8) | buf[2 * i + 1];
            f.data()[i] = v / static_cast<double>(maxval);
        }
    }
    return f;
}

Frame load_png(const fs::path& path) {
    FILE* fp = std::fopen(path.string().c_str(), "rb");
    if (!fp)
        fail(path, "cannot open file");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (fp) std::fclose(fp);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        fail(path, "libpng decode error");
    }
    png_init_io(png, fp);
    png_read_png(png, info,
                 PNG_TRANSFORM_PACKING | PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA,
                 nullptr);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    png_bytepp rows = png_get_rows(png, info);

    if (depth != 8 && depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        fail(path, "unsupported PNG bit depth " + std::to_string(depth));
    }
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        fail(path, "unsupported PNG channel count " + std::to_string(channels));
    }

    const double maxval = depth == 8 ? 255.0 : 65535.0;
    Frame f(static_cast<int>(height), static_cast<int>(width));
    for (png_uint_32 r = 0; r < height; ++r) {
        const png_bytep row = rows[r];
        for (png_uint_32 c = 0; c < width; ++c) {
            double v;
            if (channels == 1) {
                v = depth == 8 ? row[c]
                               : double((unsigned(row[2 * c]) << 8) | row[2 * c + 1]);
            } else {
                double rgb[3];
                for (int ch = 0; ch < 3; ++ch) {
                    const size_t i = (size_t(c) * 3 + ch) * (depth / 8);
                    rgb[ch] = depth == 8 ? row[i]
                                         : double((unsigned(row[i]) << 8) | row[i + 1]);
                }
                v = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
            }
            f.at(static_cast<int>(r), static_cast<int>(c)) = v / maxval;
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return f;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_key_values(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        fail(path, "cannot open file");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(path, "malformed line (expected key = value): " + line);
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

SequenceManifest read_manifest(const fs::path& manifest_path) {
    SequenceManifest m;
    m.directory = manifest_path.parent_path();
    std::string files_glob = "*.pgm";
    bool have_fs = false, have_bg = false;
    for (const auto& [key, value] : read_key_values(manifest_path)) {
        if (key == "fs") {
            m.frame_rate = std::stod(value);
            have_fs = true;
        } else if (key == "background_frames") {
            m.background_frame_count = std::stoi(value);
            have_bg = true;
        } else if (key == "files") {
            files_glob = value;
        } else {
            fail(manifest_path, "unknown manifest key: " + key);
        }
    }
    if (!have_fs || !have_bg)
        fail(manifest_path, "manifest requires keys fs and background_frames");
    if (m.frame_rate <= 0.0)
        fail(manifest_path, "fs must be positive");
    if (m.background_frame_count < 0)
        fail(manifest_path, "background_frames must be non-negative");

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(m.directory)) {
        if (!entry.is_regular_file())
            continue;
        const std::string name = entry.path().filename().string();
        if (glob_match(files_glob, name))
            names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    if (names.empty())
        fail(manifest_path, "no files match glob " + files_glob);
    for (const auto& n : names)
        m.files.push_back(m.directory / n);
    return m;
}

void write_manifest(const fs::path& manifest_path, double frame_rate,
                    int background_frame_count, const std::string& files_glob) {
    std::ofstream out(manifest_path);
    if (!out)
        fail(manifest_path, "cannot open for writing");
    out << "# frame sequence manifest\n";
    out << "fs = " << frame_rate << "\n";
    out << "background_frames = " << background_frame_count << "\n";
    out << "files = " << files_glob << "\n";
    if (!out)
        fail(manifest_path, "write failure");
}

Frame load_frame(const fs::path& path) {
    if (!fs::exists(path))
        fail(path, "missing file");
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".png")
        return load_png(path);
    return load_pgm(path);
}

void save_frame(const Frame& f, const fs::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16)
        throw std::invalid_argument("save_frame: bit_depth must be 8 or 16");
    const int maxval = bit_depth == 8 ? 255 : 65535;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(path, "cannot open for writing");
    out << "P5\n" << f.width() << " " << f.height() << "\n" << maxval << "\n";
    const size_t npix = f.size();
    std::vector<uint8_t> buf(npix * (bit_depth / 8));
    for (size_t i = 0; i < npix; ++i) {
        const double v = std::clamp(f.data()[i], 0.0, 1.0);
        // round half up
        const unsigned q = static_cast<unsigned>(std::floor(v * maxval + 0.5));
        if (bit_depth == 8) {
            buf[i] = static_cast<uint8_t>(q);
        } else {
            buf[2 * i] = static_cast<uint8_t>(q >> 8);  // big-endian
            buf[2 * i + 1] = static_cast<uint8_t>(q & 0xFF);
        }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out)
        fail(path, "write failure");
}

FrameSequence load_sequence(const SequenceManifest& manifest) {
    if (manifest.files.empty())
        throw std::runtime_error("load_sequence: empty file list");
    FrameSequence seq;
    seq.sample_time = 1.0 / manifest.frame_rate;
    seq.frames.reserve(manifest.files.size());
    for (const auto& path : manifest.files) {
        Frame f = load_frame(path);
        if (!seq.frames.empty() && !f.same_dims(seq.frames.front()))
            fail(path, "frame dimensions differ from first frame");
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

std::string format_csv_cell(const CsvCell& cell) {
    if (std::holds_alternative<double>(cell)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", std::get<double>(cell));
        return buf;
    }
    if (std::holds_alternative<long long>(cell))
        return std::to_string(std::get<long long>(cell));
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out)
        fail(path, "cannot open for writing");
    for (size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << format_csv_cell(header[i]);
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width differs from header");
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_csv_cell(row[i]);
        out << "\n";
    }
    if (!out)
        fail(path, "write failure");
}

}  // namespace mlspeed
