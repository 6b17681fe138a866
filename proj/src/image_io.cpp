#include "fpqual/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <string>

#include "fpqual/errors.hpp"

namespace fpqual {

namespace {

// PGM header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line.
int next_pgm_token(std::istream& in, const std::string& path) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw FormatError(path + ": truncated PGM header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    long value = 0;
    if (!(in >> value) || value < 0 || value > std::numeric_limits<int>::max())
        throw FormatError(path + ": malformed PGM header field");
    return static_cast<int>(value);
}

GrayImage load_pgm(std::ifstream& in, const std::string& path, int dpi) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw FormatError(path + ": unsupported format (expected P5 PGM)");

    const int width = next_pgm_token(in, path);
    const int height = next_pgm_token(in, path);
    const int maxval = next_pgm_token(in, path);
    if (width <= 0 || height <= 0)
        throw FormatError(path + ": non-positive PGM dimensions");
    if (maxval != 255)
        throw FormatError(path + ": unsupported maxval " + std::to_string(maxval) +
                          " (only 8-bit, maxval 255)");
    in.get();  // single whitespace byte after maxval

    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != pixels.size())
        throw FormatError(path + ": truncated PGM payload");

    return GrayImage(width, height, std::move(pixels), dpi);
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* file = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file) std::fclose(file);
    }
};

GrayImage load_png(const std::string& path, int dpi) {
    PngReader r;
    r.file = std::fopen(path.c_str(), "rb");
    if (!r.file) throw FormatError(path + ": unreadable file");

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw FormatError(path + ": libpng initialization failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw FormatError(path + ": libpng initialization failed");

    if (setjmp(png_jmpbuf(r.png)))
        throw FormatError(path + ": corrupt PNG stream");

    png_init_io(r.png, r.file);
    png_read_info(r.png, r.info);

    const int depth = png_get_bit_depth(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    if (color != PNG_COLOR_TYPE_GRAY)
        throw FormatError(path + ": unsupported color type (grayscale only)");
    if (depth != 8)
        throw FormatError(path + ": unsupported bit depth " + std::to_string(depth) +
                          " (8-bit only)");

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));

    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] = pixels.data() + static_cast<std::size_t>(y) * width;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    return GrayImage(width, height, std::move(pixels), dpi);
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path, int dpi) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path.string() + ": unreadable file");

    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    if (in.gcount() != 2) throw FormatError(path.string() + ": file too short");

    if (magic[0] == 'P' && magic[1] == '5') {
        in.seekg(0);
        return load_pgm(in, path.string(), dpi);
    }
    if (magic[0] == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path.string(), dpi);
    }
    throw FormatError(path.string() + ": unsupported format (expected P5 PGM or PNG)");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixels().size()));
    if (!out) throw FormatError(path.string() + ": write failed");
}

}  // namespace fpqual
