#include "nis/frame.hpp"

namespace nis {

std::vector<std::uint8_t> encode_frame(const Frame& f) {
    if (f.payload.size() > MAX_PAYLOAD_LEN)
        throw CodecError("frame payload exceeds 1500 bytes");
    std::vector<std::uint8_t> out;
    out.reserve(FRAME_HEADER_LEN + f.payload.size());
    for (int i = 0; i < 6; ++i) out.push_back(f.dst_field.octet(i));
    for (int i = 0; i < 6; ++i) out.push_back(f.src_field.octet(i));
    out.push_back(static_cast<std::uint8_t>(f.ethertype >> 8));
    out.push_back(static_cast<std::uint8_t>(f.ethertype & 0xFF));
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < FRAME_HEADER_LEN)
        throw CodecError("frame shorter than 14-byte header");
    if (bytes.size() > MAX_FRAME_LEN)
        throw CodecError("frame longer than 1514 bytes");
    Frame f;
    std::uint64_t dst = 0, src = 0;
    for (int i = 0; i < 6; ++i) dst = (dst << 8) | bytes[static_cast<size_t>(i)];
    for (int i = 0; i < 6; ++i) src = (src << 8) | bytes[static_cast<size_t>(6 + i)];
    f.dst_field = Address48(dst);
    f.src_field = Address48(src);
    f.ethertype = static_cast<std::uint16_t>((bytes[12] << 8) | bytes[13]);
    f.payload.assign(bytes.begin() + FRAME_HEADER_LEN, bytes.end());
    return f;
}

} // namespace nis
