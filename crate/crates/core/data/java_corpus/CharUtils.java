package text;

public final class CharUtils {
    private CharUtils() {}

    /** Characters that need escaping in a Java string literal. */
    public static boolean needsEscape(char c) {
        return c == '"' || c == '\\' || c == '\n' || c == '\''; // quote, backslash, newline, apostrophe
    }

    public static String escape(String s) {
        StringBuilder sb = new StringBuilder();
        for (char c : s.toCharArray()) {
            switch (c) {
                case '"': sb.append("\\\""); break;
                case '\\': sb.append("\\\\"); break;
                case '\n': sb.append("\\n"); break;
                case '/': sb.append('/'); break; // slash stays
                default: sb.append(c);
            }
        }
        return sb.toString();
    }
}
