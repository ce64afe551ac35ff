package misc;

/* header block */ public class MixedComments { // trailing after brace
    int a = 1; /* inline */ int b = 2;
    int c = 3 /* between */ + 4;
    String s = "/* not */" + '/' + "// not"; // real
    /** Javadoc on field */ int d;

    /* multi
       line
       block */
    int sum() { return a + b + c + d; } /* after method */

    int div(int x) { return x / 2 /* half */ / 1; }
}
