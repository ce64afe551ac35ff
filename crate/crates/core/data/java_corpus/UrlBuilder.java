package net.util;

/** Builds URLs; note the string literals that look like comments. */
public final class UrlBuilder {
    private static final String SCHEME = "https://"; // not a comment start inside the string
    private static final String WILDCARD = "/*"; /* a real comment */
    private final StringBuilder sb = new StringBuilder();

    public UrlBuilder host(String host) {
        sb.append(SCHEME).append(host);
        return this;
    }

    public UrlBuilder path(String... parts) {
        for (String p : parts) {
            sb.append('/').append(p); // separator
        }
        return this;
    }

    public UrlBuilder glob() {
        sb.append(WILDCARD);
        return this;
    }

    public String build() {
        return sb.toString().replace("//", "/").replace("https:/", "https://");
    }
}
