use serde::Serialize;

/// Serialize compactly (`None`) or pretty-printed with the given indent width.
pub fn to_string<T: Serialize + ?Sized>(value: &T, indent: Option<usize>) -> String {
    match indent {
        None => serde_json::to_string(value).expect("in-memory serialization cannot fail"),
        Some(width) => {
            let pad = vec![b' '; width];
            let mut buf = Vec::new();
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
            value
                .serialize(&mut ser)
                .expect("in-memory serialization cannot fail");
            String::from_utf8(buf).expect("serde_json emits UTF-8")
        }
    }
}
