package lang;

import java.util.ArrayList;
import java.util.List;

/** Tokenizes arithmetic expressions such as {@code 1 + 2 * (3 - 4)}. */
public class Parser {
    public static List<String> tokens(String src) {
        List<String> out = new ArrayList<>();
        int i = 0;
        while (i < src.length()) {
            char c = src.charAt(i);
            if (Character.isWhitespace(c)) { i++; continue; }
            if (Character.isDigit(c)) {
                int j = i;
                while (j < src.length() && Character.isDigit(src.charAt(j))) j++;
                out.add(src.substring(i, j));
                i = j;
            } else if ("+-*/()".indexOf(c) >= 0) { // operators, including '/'
                out.add(String.valueOf(c));
                i++;
            } else {
                throw new IllegalArgumentException("bad char '" + c + "' at " + i);
            }
        }
        return out;
    }
}
