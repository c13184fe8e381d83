package app.ui;

import javax.swing.JDialog;
import java.awt.Color;

public class Dialog extends JDialog {
    public void open() {
    }
}
