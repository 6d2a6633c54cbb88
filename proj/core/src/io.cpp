#include "burstacc/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "burstacc/parallel.hpp"

namespace burstacc {

FrameSequence::FrameSequence(std::vector<ImageGrid> f) : frames(std::move(f)) {
    if (frames.empty())
        throw std::invalid_argument("FrameSequence: needs at least one frame");
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (!frames[i].same_shape(frames[0]))
            throw std::invalid_argument("FrameSequence: frame " + std::to_string(i) +
                                        " dimensions differ from frame 0");
}

namespace {

constexpr double kBt601R = 0.299, kBt601G = 0.587, kBt601B = 0.114;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

// ---- PGM (P5) ---------------------------------------------------------------

int pgm_read_token(std::istream& in) {
    // skips whitespace and '#' comments
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    in >> value;
    return in ? value : -1;
}

ImageGrid load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5') fail(path, "not a binary PGM (P5)");
    const int w = pgm_read_token(in);
    const int h = pgm_read_token(in);
    const int maxval = pgm_read_token(in);
    if (w <= 0 || h <= 0) fail(path, "bad PGM dimensions");
    if (maxval != 255 && maxval != 65535) fail(path, "PGM maxval must be 255 or 65535");
    in.get();  // single whitespace after maxval

    ImageGrid img(w, h);
    const std::size_t n = img.size();
    if (maxval == 255) {
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(n));
        if (!in) fail(path, "truncated PGM data");
        for (std::size_t i = 0; i < n; ++i) img[i] = buf[i] / 255.0;
    } else {
        std::vector<unsigned char> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(2 * n));
        if (!in) fail(path, "truncated PGM data");
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned v = unsigned(buf[2 * i]) << 8 | buf[2 * i + 1];  // big-endian
            img[i] = v / 65535.0;
        }
    }
    return img;
}

// ---- PNG --------------------------------------------------------------------

ImageGrid load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) fail(path, "cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "libpng error while reading");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);

    // normalize to 8- or 16-bit gray or rgb without alpha
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    if (depth != 8 && depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported PNG bit depth");
    }

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<unsigned char> data(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageGrid img(static_cast<int>(w), static_cast<int>(h));
    const double scale = depth == 8 ? 1.0 / 255.0 : 1.0 / 65535.0;
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = data.data() + y * rowbytes;
        for (png_uint_32 x = 0; x < w; ++x) {
            double px[3] = {0, 0, 0};
            for (int c = 0; c < std::min(channels, 3); ++c) {
                const std::size_t off = (std::size_t(x) * channels + c) * (depth / 8);
                // PNG stores 16-bit samples big-endian
                const unsigned v = depth == 8 ? row[off] : (unsigned(row[off]) << 8 | row[off + 1]);
                px[c] = v * scale;
            }
            img.at(int(x), int(y)) = channels >= 3
                                         ? kBt601R * px[0] + kBt601G * px[1] + kBt601B * px[2]
                                         : px[0];
        }
    }
    return img;
}

bool glob_match(const char* pattern, const char* name) {
    // shell-style: '*' any run, '?' one char, no bracket classes
    if (*pattern == '\0') return *name == '\0';
    if (*pattern == '*') {
        for (const char* n = name;; ++n) {
            if (glob_match(pattern + 1, n)) return true;
            if (*n == '\0') return false;
        }
    }
    if (*name == '\0') return false;
    if (*pattern == '?' || *pattern == *name) return glob_match(pattern + 1, name + 1);
    return false;
}

}  // namespace

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t i2 = i, j2 = j;
            while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
            while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
            // compare digit runs numerically: strip leading zeros, then by length
            std::size_t ia = i, ja = j;
            while (ia < i2 - 1 && a[ia] == '0') ++ia;
            while (ja < j2 - 1 && b[ja] == '0') ++ja;
            const std::size_t la = i2 - ia, lb = j2 - ja;
            if (la != lb) return la < lb;
            const int cmp = a.compare(ia, la, b, ja, lb);
            if (cmp != 0) return cmp < 0;
            i = i2;
            j = j2;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() < b.size();
}

ImageGrid load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail(path, "cannot open");
    unsigned char sig[8] = {0};
    probe.read(reinterpret_cast<char*>(sig), 8);
    probe.close();

    if (sig[0] == 'P' && sig[1] == '5') return load_pgm(path);
    if (!png_sig_cmp(sig, 0, 8)) return load_png(path);
    fail(path, "unsupported format (expect PGM P5 or PNG)");
}

void save_image(const ImageGrid& image, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng error while writing");
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(image.width()), png_uint_32(image.height()), 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int w = image.width(), h = image.height();
    std::vector<unsigned char> row(std::size_t(w) * 2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = std::clamp(image.at(x, y), 0.0, 1.0);
            const unsigned q = unsigned(std::lround(v * 65535.0));
            row[2 * x] = (q >> 8) & 0xff;  // big-endian sample
            row[2 * x + 1] = q & 0xff;
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

FrameSequence load_sequence(const std::filesystem::path& directory, const std::string& pattern) {
    if (!std::filesystem::is_directory(directory))
        fail(directory, "not a directory");

    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (glob_match(pattern.c_str(), name.c_str())) paths.push_back(entry.path());
    }
    if (paths.empty())
        fail(directory, "no files matching pattern '" + pattern + "'");

    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        return natural_less(a.filename().string(), b.filename().string());
    });

    std::vector<ImageGrid> frames(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) { frames[i] = load_image(paths[i]); });

    for (std::size_t i = 1; i < frames.size(); ++i)
        if (!frames[i].same_shape(frames[0]))
            fail(paths[i], "frame dimensions differ from " + paths[0].filename().string());

    FrameSequence seq;
    seq.frames = std::move(frames);
    return seq;
}

}  // namespace burstacc
